//! Constitution checks: size budget, broken links, trigger rules that name
//! unknown agents, and orphaned knowledge docs.

use std::fmt;

use ctxforge_core::{ContextCorpus, ContextIndex};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
    pub path: Option<String>,
    pub line: Option<usize>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        };
        write!(f, "{sev}[{}]", self.code)?;
        match (&self.path, self.line) {
            (Some(p), Some(l)) => write!(f, " {p}:{l}")?,
            (Some(p), None) => write!(f, " {p}")?,
            _ => {}
        }
        write!(f, ": {}", self.message)
    }
}

pub const BUDGET_EXCEEDED: &str = "budget-exceeded";
pub const BROKEN_LINK: &str = "broken-link";
pub const UNKNOWN_AGENT: &str = "unknown-agent";
pub const MALFORMED_TRIGGER_ROW: &str = "malformed-trigger-row";
pub const MISSING_TRIGGER_TABLE: &str = "missing-trigger-table";
pub const PARSE_FAILURE: &str = "parse-failure";
pub const ORPHAN_DOC: &str = "orphan-doc";

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(|d| d.severity == Severity::Error)
}

/// Never fails; everything is reported as a diagnostic.
pub fn lint_constitution(corpus: &ContextCorpus, index: &ContextIndex) -> Vec<Diagnostic> {
    let c = &corpus.constitution;
    let mut out = Vec::new();
    let diag = |severity, code, message: String, path: Option<&str>, line| Diagnostic {
        severity,
        code,
        message,
        path: path.map(str::to_owned),
        line,
    };

    if c.line_count > c.budget {
        out.push(diag(
            Severity::Warning,
            BUDGET_EXCEEDED,
            format!("constitution is {} lines, budget is {}", c.line_count, c.budget),
            Some(&c.path),
            None,
        ));
    }
    for link in &c.doc_links {
        if !corpus.root.join(link).is_file() {
            out.push(diag(
                Severity::Error,
                BROKEN_LINK,
                format!("link target {link} does not exist"),
                Some(&c.path),
                None,
            ));
        }
    }
    if !c.trigger_section_found {
        out.push(diag(
            Severity::Warning,
            MISSING_TRIGGER_TABLE,
            "no \"Orchestration Triggers\" section; routing cannot occur".into(),
            Some(&c.path),
            None,
        ));
    }
    for row in &c.trigger_diagnostics {
        out.push(diag(
            Severity::Error,
            MALFORMED_TRIGGER_ROW,
            format!("{}: {}", row.message, row.source_row),
            Some(&c.path),
            Some(row.line),
        ));
    }
    for rule in &c.trigger_rules {
        if corpus.agent(&rule.agent).is_none() {
            out.push(diag(
                Severity::Error,
                UNKNOWN_AGENT,
                format!("trigger names unknown agent `{}`: {}", rule.agent, rule.source_row),
                Some(&c.path),
                None,
            ));
        }
    }
    for e in &corpus.diagnostics {
        out.push(diag(
            Severity::Error,
            PARSE_FAILURE,
            e.message.clone(),
            Some(&e.path),
            Some(e.line),
        ));
    }
    for doc in &corpus.docs {
        if c.doc_links.contains(&doc.path) {
            continue;
        }
        let overlaps = index
            .doc_keywords
            .get(&doc.path)
            .is_some_and(|kws| kws.iter().any(|k| c.tokens.contains(k)));
        if !overlaps {
            out.push(diag(
                Severity::Info,
                ORPHAN_DOC,
                format!(
                    "`{}` is neither linked from nor shares a keyword with the constitution",
                    doc.subsystem
                ),
                Some(&doc.path),
                None,
            ));
        }
    }
    out.sort_by_key(|d| d.severity);
    out
}
