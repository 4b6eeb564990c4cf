//! Immutable keyword index and the retrieval queries served to agents.
//!
//! Matching is presence-based: a document scores one point for every
//! distinct query token that is a substring of one of its keywords, or has
//! one of its keywords as a substring. Ties break on path (or subsystem key)
//! ascending.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::corpus::ContextCorpus;
use crate::tokenize::{distinct_tokens, substring_match, tokenize};

pub const DEFAULT_SEARCH_K: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextIndex {
    pub docs_by_subsystem: BTreeMap<String, Vec<String>>,
    pub doc_keywords: BTreeMap<String, BTreeSet<String>>,
    pub doc_subsystem: BTreeMap<String, String>,
    pub agent_keywords: BTreeMap<String, BTreeSet<String>>,
    /// keyword -> doc paths carrying it.
    pub doc_postings: BTreeMap<String, BTreeSet<String>>,
    /// keyword -> agent names carrying it.
    pub agent_postings: BTreeMap<String, BTreeSet<String>>,
    pub built_at: DateTime<Utc>,
    pub corpus_fingerprint: String,
}

/// Field order is part of the JSON contract.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelevanceHit {
    pub target: String,
    pub subsystem: Option<String>,
    pub score: usize,
    pub matched_tokens: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsystemHit {
    pub subsystem: String,
    pub score: usize,
    pub hits: Vec<RelevanceHit>,
}

/// Result of a subsystem lookup. `NotFound` is a knowledge gap, not an
/// empty success.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsystemFiles {
    Found(Vec<String>),
    NotFound,
}

impl SubsystemFiles {
    pub fn is_found(&self) -> bool {
        matches!(self, SubsystemFiles::Found(_))
    }

    pub fn files(&self) -> &[String] {
        match self {
            SubsystemFiles::Found(f) => f,
            SubsystemFiles::NotFound => &[],
        }
    }
}

fn add_posting(postings: &mut BTreeMap<String, BTreeSet<String>>, keyword: &str, target: &str) {
    postings
        .entry(keyword.to_owned())
        .or_default()
        .insert(target.to_owned());
}

impl ContextIndex {
    pub fn build(corpus: &ContextCorpus) -> Self {
        Self::build_at(corpus, Utc::now())
    }

    pub fn build_at(corpus: &ContextCorpus, built_at: DateTime<Utc>) -> Self {
        let mut index = ContextIndex {
            docs_by_subsystem: BTreeMap::new(),
            doc_keywords: BTreeMap::new(),
            doc_subsystem: BTreeMap::new(),
            agent_keywords: BTreeMap::new(),
            doc_postings: BTreeMap::new(),
            agent_postings: BTreeMap::new(),
            built_at,
            corpus_fingerprint: corpus.fingerprint.clone(),
        };
        for doc in &corpus.docs {
            let mut keywords = doc.keywords.clone();
            keywords.extend(tokenize(&doc.title));
            for h in &doc.headings {
                keywords.extend(tokenize(h));
            }
            keywords.extend(tokenize(&doc.subsystem));
            for k in &keywords {
                add_posting(&mut index.doc_postings, k, &doc.path);
            }
            index
                .docs_by_subsystem
                .entry(doc.subsystem.clone())
                .or_default()
                .push(doc.path.clone());
            index.doc_subsystem.insert(doc.path.clone(), doc.subsystem.clone());
            index.doc_keywords.insert(doc.path.clone(), keywords);
        }
        for paths in index.docs_by_subsystem.values_mut() {
            paths.sort();
        }
        for agent in &corpus.agents {
            for k in &agent.domain_keywords {
                add_posting(&mut index.agent_postings, k, &agent.name);
            }
            index
                .agent_keywords
                .insert(agent.name.clone(), agent.domain_keywords.clone());
        }
        index
    }

    /// True when both indexes describe the same content, ignoring build time.
    pub fn same_content(&self, other: &ContextIndex) -> bool {
        let mut a = self.clone();
        a.built_at = other.built_at;
        a == *other
    }

    /// `(subsystem, doc count)` sorted by key.
    pub fn list_subsystems(&self) -> Vec<(String, usize)> {
        self.docs_by_subsystem
            .iter()
            .map(|(k, v)| (k.clone(), v.len()))
            .collect()
    }

    /// Case-sensitive lookup of a subsystem's doc paths.
    pub fn get_files_for_subsystem(&self, key: &str) -> SubsystemFiles {
        match self.docs_by_subsystem.get(key) {
            Some(paths) => SubsystemFiles::Found(paths.clone()),
            None => SubsystemFiles::NotFound,
        }
    }

    /// Top `k` documents for `query`.
    pub fn search_context_documents(&self, query: &str, k: usize) -> Vec<RelevanceHit> {
        let mut hits = self.score_docs(query);
        hits.truncate(k);
        hits
    }

    /// Top `k` subsystems for `task`, each with its positively scored docs.
    pub fn find_relevant_context(&self, task: &str, k: usize) -> Vec<SubsystemHit> {
        let mut groups: BTreeMap<String, Vec<RelevanceHit>> = BTreeMap::new();
        for hit in self.score_docs(task) {
            let key = hit.subsystem.clone().unwrap_or_default();
            groups.entry(key).or_default().push(hit);
        }
        let mut ranked: Vec<SubsystemHit> = groups
            .into_iter()
            .map(|(subsystem, hits)| SubsystemHit {
                score: hits.iter().map(|h| h.score).max().unwrap_or(0),
                subsystem,
                hits,
            })
            .collect();
        ranked.sort_by(|a, b| b.score.cmp(&a.score).then_with(|| a.subsystem.cmp(&b.subsystem)));
        ranked.truncate(k);
        ranked
    }

    /// Agents matched by `task`, best first: `(name, matched tokens)`.
    pub fn score_agents(&self, task: &str) -> Vec<(String, Vec<String>)> {
        let matched = match_postings(&self.agent_postings, &distinct_tokens(task));
        let mut ranked: Vec<(String, Vec<String>)> = matched.into_iter().collect();
        ranked.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| a.0.cmp(&b.0)));
        ranked
    }

    /// Every positively scored doc, ranked (score desc, path asc).
    fn score_docs(&self, query: &str) -> Vec<RelevanceHit> {
        let matched = match_postings(&self.doc_postings, &distinct_tokens(query));
        let mut hits: Vec<RelevanceHit> = matched
            .into_iter()
            .map(|(path, tokens)| RelevanceHit {
                subsystem: self.doc_subsystem.get(&path).cloned(),
                target: path,
                score: tokens.len(),
                matched_tokens: tokens,
            })
            .collect();
        hits.sort_by(|a, b| b.score.cmp(&a.score).then_with(|| a.target.cmp(&b.target)));
        hits
    }
}

/// For each query token, unions the postings of every keyword it matches and
/// credits the token to each target reached. Returned token lists are sorted.
fn match_postings(
    postings: &BTreeMap<String, BTreeSet<String>>,
    tokens: &[String],
) -> BTreeMap<String, Vec<String>> {
    let mut matched: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for token in tokens {
        let mut reached: BTreeSet<&str> = BTreeSet::new();
        for (keyword, targets) in postings {
            if substring_match(token, keyword) {
                reached.extend(targets.iter().map(String::as_str));
            }
        }
        for target in reached {
            matched.entry(target.to_owned()).or_default().insert(token.clone());
        }
    }
    matched
        .into_iter()
        .map(|(t, toks)| (t, toks.into_iter().collect()))
        .collect()
}
