//! Per-tier size accounting and the knowledge-to-code ratio.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use crate::corpus::{ContextCorpus, Tier};
use crate::glob::Glob;
use crate::markdown::line_count;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TierStats {
    pub tier: Tier,
    pub label: String,
    pub files: usize,
    pub lines: usize,
    /// Lines as a fraction of source lines, when source was measured.
    pub fraction_of_code: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceStats {
    pub globs: Vec<String>,
    pub files: usize,
    pub lines: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleReport {
    pub tiers: Vec<TierStats>,
    pub total_files: usize,
    pub total_lines: usize,
    pub source: Option<SourceStats>,
    /// Context lines / source lines. Omitted when no source file matched.
    pub knowledge_to_code_ratio: Option<f64>,
    pub notes: Vec<String>,
}

/// Measures source files under `root` matching any of `globs`. Corpus
/// members are never counted as source.
pub fn measure_source(root: &Path, globs: &[String], corpus: &ContextCorpus) -> SourceStats {
    let compiled: Vec<Glob> = globs.iter().map(|g| Glob::new(g)).collect();
    let members = corpus.member_paths();
    let mut files = 0;
    let mut lines = 0;
    for entry in WalkDir::new(root)
        .sort_by_file_name()
        .into_iter()
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file())
    {
        let rel = entry
            .path()
            .strip_prefix(root)
            .unwrap_or(entry.path())
            .components()
            .map(|c| c.as_os_str().to_string_lossy().into_owned())
            .collect::<Vec<_>>()
            .join("/");
        if members.contains(rel.as_str()) || !compiled.iter().any(|g| g.matches(&rel)) {
            continue;
        }
        if let Ok(bytes) = fs::read(entry.path()) {
            files += 1;
            lines += line_count(&String::from_utf8_lossy(&bytes));
        }
    }
    SourceStats {
        globs: globs.to_vec(),
        files,
        lines,
    }
}

/// Builds the report from already-measured source stats.
pub fn scale_report_with(corpus: &ContextCorpus, source: Option<SourceStats>) -> ScaleReport {
    let counts = corpus.tier_counts();
    let lines = corpus.tier_lines();
    let source_lines = source.as_ref().map(|s| s.lines).filter(|l| *l > 0);
    let mut notes = Vec::new();
    if let Some(s) = &source {
        if s.files == 0 {
            notes.push(format!(
                "source globs {:?} matched no files; ratio omitted",
                s.globs
            ));
        } else if s.lines == 0 {
            notes.push("matched source files are empty; ratio omitted".to_owned());
        }
    }
    let tiers = [Tier::Tier1, Tier::Tier2, Tier::Tier3]
        .into_iter()
        .enumerate()
        .map(|(i, tier)| TierStats {
            tier,
            label: tier.label().to_owned(),
            files: counts[i],
            lines: lines[i],
            fraction_of_code: source_lines.map(|s| lines[i] as f64 / s as f64),
        })
        .collect();
    let total_lines = corpus.total_lines();
    ScaleReport {
        tiers,
        total_files: corpus.total_files(),
        total_lines,
        knowledge_to_code_ratio: source_lines.map(|s| total_lines as f64 / s as f64),
        source,
        notes,
    }
}

/// Tier counts and line totals, plus the knowledge-to-code ratio when
/// `source_globs` is given.
pub fn scale_report(corpus: &ContextCorpus, source_globs: Option<&[String]>) -> ScaleReport {
    let source = source_globs.map(|g| measure_source(&corpus.root, g, corpus));
    scale_report_with(corpus, source)
}
