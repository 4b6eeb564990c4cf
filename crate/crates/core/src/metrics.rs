//! Interaction metrics over JSONL session logs.
//!
//! Native record shape, one per line:
//! `{"session_id":"s1","timestamp":"2025-01-01T00:00:00Z","kind":"human_prompt","text":"...","agent":null}`

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::corpus::AgentSpec;

/// Prompts with at most this many whitespace-delimited words are short.
pub const SHORT_PROMPT_WORDS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    HumanPrompt,
    AgentInvocation,
    AgentTurn,
}

impl RecordKind {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "human_prompt" => Some(Self::HumanPrompt),
            "agent_invocation" => Some(Self::AgentInvocation),
            "agent_turn" => Some(Self::AgentTurn),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteractionRecord {
    pub session_id: String,
    pub timestamp: DateTime<Utc>,
    pub kind: RecordKind,
    pub text: Option<String>,
    pub agent: Option<String>,
}

/// Maps one parsed JSON line to a record; `None` marks the line skipped.
pub trait RecordAdapter {
    fn adapt(&self, line: &Value) -> Option<InteractionRecord>;
}

/// Adapter for the native record shape.
#[derive(Debug, Clone, Copy, Default)]
pub struct NativeAdapter;

impl RecordAdapter for NativeAdapter {
    fn adapt(&self, line: &Value) -> Option<InteractionRecord> {
        let obj = line.as_object()?;
        let session_id = obj.get("session_id")?.as_str()?.to_owned();
        let timestamp = DateTime::parse_from_rfc3339(obj.get("timestamp")?.as_str()?)
            .ok()?
            .with_timezone(&Utc);
        let kind = RecordKind::parse(obj.get("kind")?.as_str()?)?;
        let text = obj.get("text").and_then(Value::as_str).map(str::to_owned);
        let agent = obj
            .get("agent")
            .and_then(Value::as_str)
            .filter(|a| !a.is_empty())
            .map(str::to_owned);
        match kind {
            RecordKind::HumanPrompt if text.is_none() => return None,
            RecordKind::AgentInvocation if agent.is_none() => return None,
            _ => {}
        }
        Some(InteractionRecord {
            session_id,
            timestamp,
            kind,
            text,
            agent,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Ingested {
    pub records: Vec<InteractionRecord>,
    pub skipped_records: usize,
    /// Files that could not be read, with the reason.
    pub file_errors: Vec<(PathBuf, String)>,
}

pub fn ingest_logs(paths: &[PathBuf]) -> Ingested {
    ingest_logs_with(paths, &NativeAdapter)
}

/// Reads every file; blank lines are ignored, lines that do not parse or
/// adapt count as skipped.
pub fn ingest_logs_with(paths: &[PathBuf], adapter: &dyn RecordAdapter) -> Ingested {
    let mut out = Ingested::default();
    for path in paths {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                out.file_errors.push((path.clone(), e.to_string()));
                continue;
            }
        };
        ingest_text(&text, adapter, &mut out);
    }
    out
}

pub fn ingest_text(text: &str, adapter: &dyn RecordAdapter, out: &mut Ingested) {
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<Value>(line)
            .ok()
            .and_then(|v| adapter.adapt(&v))
        {
            Some(r) => out.records.push(r),
            None => out.skipped_records += 1,
        }
    }
}

/// `*.jsonl` files under `dir`, sorted.
pub fn log_files(dir: &Path) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = walkdir::WalkDir::new(dir)
        .into_iter()
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file())
        .filter(|e| e.path().extension().is_some_and(|x| x == "jsonl"))
        .map(|e| e.into_path())
        .collect();
    files.sort();
    files
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentCount {
    pub agent: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionStats {
    pub sessions: usize,
    pub human_prompts: usize,
    pub agent_invocations: usize,
    pub agent_turns: usize,
    /// Human prompts plus agent turns. Invocations happen inside agent
    /// activity and are not added again.
    pub total: usize,
    /// `None` when there are no sessions.
    pub prompts_per_session: Option<f64>,
    pub short_prompts: usize,
    /// `None` when there are no human prompts.
    pub short_prompt_fraction: Option<f64>,
    pub specialist_invocations: usize,
    pub builtin_invocations: usize,
    pub unclassifiable_invocations: usize,
    /// Specialist agents by invocation count (desc), then name.
    pub top_agents: Vec<AgentCount>,
    pub skipped_records: usize,
}

pub fn word_count(text: &str) -> usize {
    text.split_whitespace().count()
}

/// Folds records into counts. Invocations of registry agents are
/// specialist, of `builtin_agents` builtin, anything else unclassifiable.
pub fn compute_stats(
    records: &[InteractionRecord],
    registry: &[AgentSpec],
    builtin_agents: &[String],
) -> SessionStats {
    let specialists: BTreeSet<&str> = registry.iter().map(|a| a.name.as_str()).collect();
    let builtins: BTreeSet<&str> = builtin_agents.iter().map(String::as_str).collect();
    let mut sessions: BTreeSet<&str> = BTreeSet::new();
    let (mut prompts, mut invocations, mut turns, mut short) = (0, 0, 0, 0);
    let (mut specialist, mut builtin, mut unclassifiable) = (0, 0, 0);
    let mut per_agent: BTreeMap<&str, usize> = BTreeMap::new();

    for r in records {
        sessions.insert(&r.session_id);
        match r.kind {
            RecordKind::HumanPrompt => {
                prompts += 1;
                if word_count(r.text.as_deref().unwrap_or("")) <= SHORT_PROMPT_WORDS {
                    short += 1;
                }
            }
            RecordKind::AgentTurn => turns += 1,
            RecordKind::AgentInvocation => {
                invocations += 1;
                let agent = r.agent.as_deref().unwrap_or("");
                if specialists.contains(agent) {
                    specialist += 1;
                    *per_agent.entry(agent).or_default() += 1;
                } else if builtins.contains(agent) {
                    builtin += 1;
                } else {
                    unclassifiable += 1;
                }
            }
        }
    }

    let mut top_agents: Vec<AgentCount> = per_agent
        .into_iter()
        .map(|(agent, count)| AgentCount {
            agent: agent.to_owned(),
            count,
        })
        .collect();
    top_agents.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.agent.cmp(&b.agent)));

    SessionStats {
        sessions: sessions.len(),
        human_prompts: prompts,
        agent_invocations: invocations,
        agent_turns: turns,
        total: prompts + turns,
        prompts_per_session: (!sessions.is_empty()).then(|| prompts as f64 / sessions.len() as f64),
        short_prompts: short,
        short_prompt_fraction: (prompts > 0).then(|| short as f64 / prompts as f64),
        specialist_invocations: specialist,
        builtin_invocations: builtin,
        unclassifiable_invocations: unclassifiable,
        top_agents,
        skipped_records: 0,
    }
}
