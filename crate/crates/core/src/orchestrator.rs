//! Routing tasks and file changes to specialist agents.

use serde::{Deserialize, Serialize};

use crate::glob::Glob;
use crate::index::ContextIndex;
use crate::tokenize::tokenize;
use crate::triggers::{Phase, TriggerRule};

pub const DEFAULT_SUGGEST_K: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoutingReason {
    GlobMatch,
    KeywordMatch,
    Suggestion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutingDecision {
    pub agent: String,
    pub phase: Phase,
    pub reason: RoutingReason,
    /// Matched globs first (rule order), then matched keywords (rule order).
    pub evidence: Vec<String>,
    /// 0 for rule matches, matched token count for suggestions.
    pub score: usize,
}

/// Fires every rule of `phase` whose globs match a changed path or whose
/// keywords appear among the task tokens. Rule order is kept and only the
/// first decision per agent survives.
pub fn route(
    rules: &[TriggerRule],
    phase: Phase,
    changed_paths: &[String],
    task_text: Option<&str>,
) -> Vec<RoutingDecision> {
    let task_tokens = task_text.map(tokenize).unwrap_or_default();
    let mut decisions: Vec<RoutingDecision> = Vec::new();
    for rule in rules.iter().filter(|r| r.phase == phase) {
        if decisions.iter().any(|d| d.agent == rule.agent) {
            continue;
        }
        let globs: Vec<String> = rule
            .file_globs
            .iter()
            .filter(|g| {
                let g = Glob::new(g);
                changed_paths.iter().any(|p| g.matches(p))
            })
            .cloned()
            .collect();
        let keywords: Vec<String> = rule
            .keywords
            .iter()
            .filter(|k| task_tokens.contains(k))
            .cloned()
            .collect();
        if globs.is_empty() && keywords.is_empty() {
            continue;
        }
        let reason = if globs.is_empty() {
            RoutingReason::KeywordMatch
        } else {
            RoutingReason::GlobMatch
        };
        decisions.push(RoutingDecision {
            agent: rule.agent.clone(),
            phase,
            reason,
            evidence: globs.into_iter().chain(keywords).collect(),
            score: 0,
        });
    }
    decisions
}

/// Ranks registry agents by how many distinct task tokens match their domain
/// keywords. Suggestions are reported as pre-change advice.
pub fn suggest_agent(index: &ContextIndex, task: &str, k: usize) -> Vec<RoutingDecision> {
    index
        .score_agents(task)
        .into_iter()
        .take(k)
        .map(|(agent, tokens)| RoutingDecision {
            agent,
            phase: Phase::PreChange,
            reason: RoutingReason::Suggestion,
            score: tokens.len(),
            evidence: tokens,
        })
        .collect()
}
