//! Staleness detection: source files that changed in the recent window
//! without a matching update to their subsystem's knowledge docs.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use chrono::{DateTime, Duration, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::ContextCorpus;
use crate::glob::{normalize_path, Glob};

pub const DEFAULT_WINDOW_DAYS: u32 = 14;

/// `git log` arguments minus `--since`; commit id and strict ISO committer
/// date separated by a tab, then the touched paths.
pub const GIT_LOG_FORMAT: &str = "--pretty=format:%H%x09%cI";

#[derive(Debug, Error)]
pub enum DriftError {
    #[error("version control unavailable: {0}")]
    Environment(String),
    #[error("line {line}: {message}: `{text}`")]
    Parse {
        line: usize,
        text: String,
        message: String,
    },
    #[error("failed to read change log {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid change log {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeEntry {
    pub commit: String,
    pub timestamp: DateTime<Utc>,
    pub paths: Vec<String>,
}

/// Commits, newest first.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ChangeLog {
    pub entries: Vec<ChangeEntry>,
}

impl ChangeLog {
    pub fn new(mut entries: Vec<ChangeEntry>) -> Self {
        for e in &mut entries {
            for p in &mut e.paths {
                *p = normalize_path(p);
            }
        }
        entries.sort_by_key(|e| std::cmp::Reverse(e.timestamp));
        Self { entries }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let raw: ChangeLog = serde_json::from_str(text)?;
        Ok(Self::new(raw.entries))
    }

    pub fn load(path: &Path) -> Result<Self, DriftError> {
        let text = fs::read_to_string(path).map_err(|source| DriftError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text).map_err(|source| DriftError::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Entries at or after `as_of - window_days`.
    pub fn within_window(&self, window_days: u32, as_of: DateTime<Utc>) -> ChangeLog {
        let cutoff = window_start(window_days, as_of);
        ChangeLog {
            entries: self
                .entries
                .iter()
                .filter(|e| e.timestamp >= cutoff)
                .cloned()
                .collect(),
        }
    }

    /// Parses `git log --name-only` output in [`GIT_LOG_FORMAT`]. Blank
    /// separator lines are ignored.
    pub fn parse_git_log(output: &str) -> Result<Self, DriftError> {
        let mut entries: Vec<ChangeEntry> = Vec::new();
        for (idx, line) in output.lines().enumerate() {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            if let Some((commit, ts)) = line.split_once('\t') {
                let timestamp = DateTime::parse_from_rfc3339(ts.trim())
                    .map_err(|e| DriftError::Parse {
                        line: line_no,
                        text: line.to_owned(),
                        message: format!("bad timestamp ({e})"),
                    })?
                    .with_timezone(&Utc);
                if commit.trim().is_empty() {
                    return Err(DriftError::Parse {
                        line: line_no,
                        text: line.to_owned(),
                        message: "empty commit id".into(),
                    });
                }
                entries.push(ChangeEntry {
                    commit: commit.trim().to_owned(),
                    timestamp,
                    paths: Vec::new(),
                });
                continue;
            }
            match entries.last_mut() {
                Some(entry) => entry.paths.push(line.trim().to_owned()),
                None => {
                    return Err(DriftError::Parse {
                        line: line_no,
                        text: line.to_owned(),
                        message: "path before any commit header".into(),
                    })
                }
            }
        }
        Ok(Self::new(entries))
    }
}

pub fn window_start(window_days: u32, as_of: DateTime<Utc>) -> DateTime<Utc> {
    as_of - Duration::days(i64::from(window_days))
}

/// Runs `git log` in `repo` for the last `window_days` days.
pub fn collect_changes(repo: &Path, window_days: u32) -> Result<ChangeLog, DriftError> {
    let output = Command::new("git")
        .arg("-C")
        .arg(repo)
        .args([
            "log",
            &format!("--since={window_days}.days"),
            "--name-only",
            GIT_LOG_FORMAT,
        ])
        .output()
        .map_err(|e| DriftError::Environment(format!("cannot run git: {e}")))?;
    if !output.status.success() {
        return Err(DriftError::Environment(
            String::from_utf8_lossy(&output.stderr).trim().to_owned(),
        ));
    }
    ChangeLog::parse_git_log(&String::from_utf8_lossy(&output.stdout))
}

/// Reads an exported change log and keeps the entries inside the window.
pub fn collect_changes_from_file(
    path: &Path,
    window_days: u32,
    as_of: DateTime<Utc>,
) -> Result<ChangeLog, DriftError> {
    Ok(ChangeLog::load(path)?.within_window(window_days, as_of))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaleSubsystem {
    pub subsystem: String,
    pub doc_paths: Vec<String>,
    pub source_paths: Vec<String>,
    /// Most recent in-window change to one of the docs, if any.
    pub last_doc_change: Option<DateTime<Utc>>,
    pub last_source_change: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DriftReport {
    pub window_days: u32,
    pub stale: Vec<StaleSubsystem>,
    /// Subsystems that are not stale.
    pub clean: Vec<String>,
    /// In-window non-corpus paths matched by no subsystem glob.
    pub unmapped_paths: Vec<String>,
}

impl DriftReport {
    pub fn is_stale(&self) -> bool {
        !self.stale.is_empty()
    }
}

struct SubsystemView {
    globs: Vec<Glob>,
    docs: BTreeSet<String>,
}

/// A subsystem is stale when one of its source globs matched an in-window
/// change and none of its docs changed at or after the earliest such change.
/// Corpus files are never treated as source.
pub fn detect_drift(
    corpus: &ContextCorpus,
    log: &ChangeLog,
    window_days: u32,
    as_of: DateTime<Utc>,
) -> DriftReport {
    let mut subsystems: BTreeMap<&str, SubsystemView> = BTreeMap::new();
    for doc in &corpus.docs {
        let view = subsystems.entry(&doc.subsystem).or_insert_with(|| SubsystemView {
            globs: Vec::new(),
            docs: BTreeSet::new(),
        });
        view.globs.extend(doc.source_globs.iter().map(|g| Glob::new(g)));
        view.docs.insert(doc.path.clone());
    }
    let members = corpus.member_paths();
    let recent = log.within_window(window_days, as_of);

    let mut unmapped: BTreeSet<String> = BTreeSet::new();
    for entry in &recent.entries {
        for path in &entry.paths {
            if members.contains(path.as_str()) {
                continue;
            }
            if !subsystems.values().any(|s| s.globs.iter().any(|g| g.matches(path))) {
                unmapped.insert(path.clone());
            }
        }
    }

    let mut stale = Vec::new();
    let mut clean = Vec::new();
    for (key, view) in &subsystems {
        let mut source_paths: BTreeSet<String> = BTreeSet::new();
        let mut first_source: Option<DateTime<Utc>> = None;
        let mut last_source: Option<DateTime<Utc>> = None;
        let mut doc_changes: Vec<DateTime<Utc>> = Vec::new();
        for entry in &recent.entries {
            let mut touched_source = false;
            for path in &entry.paths {
                if view.docs.contains(path) {
                    doc_changes.push(entry.timestamp);
                } else if !members.contains(path.as_str()) && view.globs.iter().any(|g| g.matches(path)) {
                    source_paths.insert(path.clone());
                    touched_source = true;
                }
            }
            if touched_source {
                first_source = Some(first_source.map_or(entry.timestamp, |t| t.min(entry.timestamp)));
                last_source = Some(last_source.map_or(entry.timestamp, |t| t.max(entry.timestamp)));
            }
        }
        let (Some(first), Some(last)) = (first_source, last_source) else {
            clean.push((*key).to_owned());
            continue;
        };
        if doc_changes.iter().any(|t| *t >= first) {
            clean.push((*key).to_owned());
            continue;
        }
        stale.push(StaleSubsystem {
            subsystem: (*key).to_owned(),
            doc_paths: view.docs.iter().cloned().collect(),
            source_paths: source_paths.into_iter().collect(),
            last_doc_change: doc_changes.into_iter().max(),
            last_source_change: last,
        });
    }

    DriftReport {
        window_days,
        stale,
        clean,
        unmapped_paths: unmapped.into_iter().collect(),
    }
}

/// Session-injectable warning: a header line and one line per stale
/// subsystem (ascending). Empty when nothing is stale.
pub fn render_warning(report: &DriftReport) -> String {
    if report.stale.is_empty() {
        return String::new();
    }
    let mut stale: Vec<&StaleSubsystem> = report.stale.iter().collect();
    stale.sort_by(|a, b| a.subsystem.cmp(&b.subsystem));
    let mut out = format!(
        "WARNING: {} subsystem spec(s) may be stale: source changed in the last {} days without a doc update\n",
        stale.len(),
        report.window_days
    );
    for s in stale {
        out.push_str(&format!(
            "- {}: update {} (changed: {})\n",
            s.subsystem,
            s.doc_paths.join(", "),
            s.source_paths.join(", ")
        ));
    }
    out
}
