//! Brute-force reference implementations used to check the library.
//! Nothing here calls into the code under test.
#![allow(dead_code)]

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::LazyLock;

use chrono::{DateTime, Duration, Utc};
use globset::GlobBuilder;
use regex::Regex;

const STOP: [&str; 14] = [
    "its", "all", "not", "you", "are", "that", "this", "when", "what", "how", "with", "for", "and",
    "the",
];

/// Regex route to the tokenization rule.
pub fn tokens(text: &str) -> Vec<String> {
    static WORD: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[\p{Alphabetic}\p{N}]+").unwrap());
    let lowered = text.to_lowercase();
    let mut out = Vec::new();
    for m in WORD.find_iter(&lowered) {
        let t = m.as_str();
        if t.chars().count() < 3 || STOP.contains(&t) {
            continue;
        }
        out.push(t.to_string());
    }
    out
}

pub fn token_set(text: &str) -> BTreeSet<String> {
    tokens(text).into_iter().collect()
}

/// Filename stem to subsystem key, walking characters one by one.
pub fn subsystem_from_filename(file_name: &str) -> String {
    let stem = match file_name.rfind('.') {
        Some(i) if i > 0 => &file_name[..i],
        _ => file_name,
    };
    let mut out = String::new();
    let mut pending_dash = false;
    for c in stem.chars() {
        if c.is_alphanumeric() {
            if pending_dash && !out.is_empty() {
                out.push('-');
            }
            pending_dash = false;
            for l in c.to_lowercase() {
                out.push(l);
            }
        } else {
            pending_dash = true;
        }
    }
    out
}

/// Glob-vs-keyword signal rule, written as a regex.
pub fn is_glob_signal(entry: &str) -> bool {
    Regex::new(r"[/*]|\.[A-Za-z0-9]").unwrap().is_match(entry)
}

pub fn glob_match(pattern: &str, path: &str) -> bool {
    thread_local! {
        static CACHE: RefCell<HashMap<String, Option<globset::GlobMatcher>>> = RefCell::new(HashMap::new());
    }
    CACHE.with(|cache| {
        let mut cache = cache.borrow_mut();
        let matcher = cache.entry(pattern.to_string()).or_insert_with(|| {
            GlobBuilder::new(pattern.trim_start_matches('/'))
                .literal_separator(true)
                .backslash_escape(false)
                .build()
                .ok()
                .map(|g| g.compile_matcher())
        });
        matcher.as_ref().is_some_and(|m| m.is_match(path))
    })
}

pub fn substring_either(a: &str, b: &str) -> bool {
    a.contains(b) || b.contains(a)
}

#[derive(Debug, Clone)]
pub struct OracleDoc {
    pub path: String,
    pub subsystem: String,
    pub keywords: BTreeSet<String>,
}

/// Keywords a doc is retrievable by.
pub fn doc_keywords(frontmatter: &BTreeSet<String>, title: &str, headings: &[String], subsystem: &str) -> BTreeSet<String> {
    let mut all = frontmatter.clone();
    all.extend(token_set(title));
    for h in headings {
        all.extend(token_set(h));
    }
    all.extend(token_set(subsystem));
    all
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleHit {
    pub target: String,
    pub subsystem: String,
    pub score: usize,
    pub matched: Vec<String>,
}

/// Every (doc, token, keyword) triple is checked; nothing is precomputed.
pub fn score_all(docs: &[OracleDoc], query: &str) -> Vec<OracleHit> {
    let qs = token_set(query);
    let mut hits = Vec::new();
    for d in docs {
        let mut matched = Vec::new();
        for t in &qs {
            let mut hit = false;
            for k in &d.keywords {
                if substring_either(t, k) {
                    hit = true;
                }
            }
            if hit {
                matched.push(t.clone());
            }
        }
        if !matched.is_empty() {
            hits.push(OracleHit {
                target: d.path.clone(),
                subsystem: d.subsystem.clone(),
                score: matched.len(),
                matched,
            });
        }
    }
    // Selection-style ranking: repeatedly pull out the best remaining hit.
    let mut ranked = Vec::new();
    while !hits.is_empty() {
        let mut best = 0;
        for i in 1..hits.len() {
            let (a, b) = (&hits[i], &hits[best]);
            if a.score > b.score || (a.score == b.score && a.target < b.target) {
                best = i;
            }
        }
        ranked.push(hits.remove(best));
    }
    ranked
}

pub fn search(docs: &[OracleDoc], query: &str, k: usize) -> Vec<OracleHit> {
    score_all(docs, query).into_iter().take(k).collect()
}

/// (subsystem, max score, member hits) ranked by score desc then key.
pub fn find(docs: &[OracleDoc], task: &str, k: usize) -> Vec<(String, usize, Vec<OracleHit>)> {
    let all = score_all(docs, task);
    let keys: BTreeSet<String> = all.iter().map(|h| h.subsystem.clone()).collect();
    let mut groups: Vec<(String, usize, Vec<OracleHit>)> = keys
        .into_iter()
        .map(|key| {
            let members: Vec<OracleHit> = all.iter().filter(|h| h.subsystem == key).cloned().collect();
            let max = members.iter().map(|h| h.score).max().unwrap();
            (key, max, members)
        })
        .collect();
    groups.sort_by(|a, b| (std::cmp::Reverse(a.1), &a.0).cmp(&(std::cmp::Reverse(b.1), &b.0)));
    groups.truncate(k);
    groups
}

/// Agent suggestion: (agent, matched tokens) ranked.
pub fn suggest(agents: &BTreeMap<String, BTreeSet<String>>, task: &str, k: usize) -> Vec<(String, Vec<String>)> {
    let docs: Vec<OracleDoc> = agents
        .iter()
        .map(|(name, kws)| OracleDoc {
            path: name.clone(),
            subsystem: String::new(),
            keywords: kws.clone(),
        })
        .collect();
    search(&docs, task, k)
        .into_iter()
        .map(|h| (h.target, h.matched))
        .collect()
}

#[derive(Debug, Clone)]
pub struct OracleSubsystem {
    pub key: String,
    pub docs: Vec<String>,
    pub globs: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct OracleCommit {
    pub at: DateTime<Utc>,
    pub paths: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleDrift {
    /// subsystem -> triggering source paths
    pub stale: BTreeMap<String, BTreeSet<String>>,
    pub clean: BTreeSet<String>,
    pub unmapped: BTreeSet<String>,
}

/// Direct restatement of the stale predicate. `members` are corpus file
/// paths, which never count as source.
pub fn drift(
    subsystems: &[OracleSubsystem],
    members: &BTreeSet<String>,
    commits: &[OracleCommit],
    window_days: u32,
    as_of: DateTime<Utc>,
) -> OracleDrift {
    let cutoff = as_of - Duration::days(window_days as i64);
    let in_window: Vec<&OracleCommit> = commits.iter().filter(|c| c.at >= cutoff).collect();
    let mut out = OracleDrift {
        stale: BTreeMap::new(),
        clean: BTreeSet::new(),
        unmapped: BTreeSet::new(),
    };
    for c in &in_window {
        for p in &c.paths {
            if members.contains(p) {
                continue;
            }
            let mapped = subsystems
                .iter()
                .any(|s| s.globs.iter().any(|g| glob_match(g, p)));
            if !mapped {
                out.unmapped.insert(p.clone());
            }
        }
    }
    for s in subsystems {
        let is_source = |p: &String| !members.contains(p) && s.globs.iter().any(|g| glob_match(g, p));
        let source_commits: Vec<&&OracleCommit> = in_window.iter().filter(|c| c.paths.iter().any(is_source)).collect();
        if source_commits.is_empty() {
            out.clean.insert(s.key.clone());
            continue;
        }
        let earliest = source_commits.iter().map(|c| c.at).min().unwrap();
        let doc_updated = in_window
            .iter()
            .any(|c| c.at >= earliest && c.paths.iter().any(|p| s.docs.contains(p)));
        if doc_updated {
            out.clean.insert(s.key.clone());
        } else {
            let paths = source_commits
                .iter()
                .flat_map(|c| c.paths.iter().filter(|p| is_source(p)).cloned())
                .collect();
            out.stale.insert(s.key.clone(), paths);
        }
    }
    out
}
