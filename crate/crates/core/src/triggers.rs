//! Orchestration trigger tables embedded in the constitution.

use serde::{Deserialize, Serialize};

use crate::markdown::{headings, is_table_separator, table_cells};
use crate::tokenize::tokenize;

/// Heading text that marks the trigger section.
pub const TRIGGER_SECTION_MARKER: &str = "Orchestration Triggers";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    PreChange,
    PostChange,
}

impl Phase {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pre-change" | "pre_change" | "prechange" | "pre" => Some(Phase::PreChange),
            "post-change" | "post_change" | "postchange" | "post" => Some(Phase::PostChange),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Phase::PreChange => "Pre-change",
            Phase::PostChange => "Post-change",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriggerRule {
    pub phase: Phase,
    pub file_globs: Vec<String>,
    pub keywords: Vec<String>,
    pub agent: String,
    pub source_row: String,
}

/// A table row that could not become a rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowDiagnostic {
    /// 1-based line in the constitution.
    pub line: usize,
    pub source_row: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TriggerTable {
    pub rules: Vec<TriggerRule>,
    pub diagnostics: Vec<RowDiagnostic>,
    /// False when no "Orchestration Triggers" section exists.
    pub section_found: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Signal {
    Glob(String),
    Keyword(String),
}

/// Classifies one comma-separated signal entry. Entries containing `/`, `*`
/// or a `.ext` suffix are file globs; anything else is a keyword phrase.
pub fn classify_signal(entry: &str) -> Signal {
    let entry = entry.trim();
    if entry.contains('/') || entry.contains('*') || has_extension(entry) {
        Signal::Glob(entry.to_owned())
    } else {
        Signal::Keyword(entry.to_owned())
    }
}

fn has_extension(entry: &str) -> bool {
    let chars: Vec<char> = entry.chars().collect();
    chars
        .windows(2)
        .any(|w| w[0] == '.' && w[1].is_ascii_alphanumeric())
}

/// Parses every Trigger | Signal | Agent table found under a heading that
/// contains [`TRIGGER_SECTION_MARKER`].
pub fn parse_trigger_table(constitution_text: &str) -> TriggerTable {
    let mut table = TriggerTable::default();
    let lines: Vec<&str> = constitution_text.lines().collect();
    let hs = headings(constitution_text);

    for (i, h) in hs.iter().enumerate() {
        if !h.text.contains(TRIGGER_SECTION_MARKER) {
            continue;
        }
        table.section_found = true;
        let end = hs[i + 1..]
            .iter()
            .find(|next| next.level <= h.level)
            .map(|next| next.line - 1)
            .unwrap_or(lines.len());
        parse_section(&lines, h.line, end, &mut table);
    }
    table
}

/// Parses lines `start..end` (0-based slice bounds; `start` is the heading
/// line number which is 1-based, so the slice begins after the heading).
fn parse_section(lines: &[&str], start: usize, end: usize, out: &mut TriggerTable) {
    let mut in_table = false;
    for (idx, line) in lines.iter().enumerate().take(end).skip(start) {
        let line = *line;
        let line_no = idx + 1;
        let Some(cells) = table_cells(line) else {
            in_table = false;
            continue;
        };
        if !in_table {
            // Header row decides whether this table is a trigger table.
            let header: Vec<String> = cells.iter().map(|c| strip_markup(c).to_lowercase()).collect();
            in_table = header.len() == 3
                && header[0] == "trigger"
                && header[1] == "signal"
                && header[2] == "agent";
            continue;
        }
        if is_table_separator(&cells) {
            continue;
        }
        match parse_row(&cells, line.trim()) {
            Ok(rule) => out.rules.push(rule),
            Err(message) => out.diagnostics.push(RowDiagnostic {
                line: line_no,
                source_row: line.trim().to_owned(),
                message,
            }),
        }
    }
}

fn strip_markup(cell: &str) -> String {
    cell.trim()
        .trim_matches(|c| c == '*' || c == '`' || c == '_')
        .trim()
        .to_owned()
}

fn parse_row(cells: &[String], source_row: &str) -> Result<TriggerRule, String> {
    if cells.len() != 3 {
        return Err(format!("expected 3 cells, found {}", cells.len()));
    }
    let phase_cell = strip_markup(&cells[0]);
    let phase = Phase::parse(&phase_cell)
        .ok_or_else(|| format!("unknown trigger `{phase_cell}` (expected Pre-change or Post-change)"))?;
    let agent = strip_markup(&cells[2]);
    if agent.is_empty() {
        return Err("empty agent cell".into());
    }

    let mut file_globs = Vec::new();
    let mut keywords: Vec<String> = Vec::new();
    for entry in cells[1].split(',') {
        let entry = entry.trim().trim_matches('`').trim();
        if entry.is_empty() {
            continue;
        }
        match classify_signal(entry) {
            Signal::Glob(g) => file_globs.push(g),
            Signal::Keyword(k) => {
                for token in tokenize(&k) {
                    if !keywords.contains(&token) {
                        keywords.push(token);
                    }
                }
            }
        }
    }
    if file_globs.is_empty() && keywords.is_empty() {
        return Err("signal cell has no file globs or keywords".into());
    }
    Ok(TriggerRule {
        phase,
        file_globs,
        keywords,
        agent,
        source_row: source_row.to_owned(),
    })
}
