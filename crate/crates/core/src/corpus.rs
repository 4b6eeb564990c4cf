//! The on-disk context corpus: one constitution, specialist agent specs and
//! per-subsystem knowledge documents.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Component, Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use walkdir::WalkDir;

use crate::error::{CorpusError, ParseError};
use crate::frontmatter;
use crate::markdown::{self, line_count};
use crate::tokenize::tokenize;
use crate::triggers::{parse_trigger_table, RowDiagnostic, TriggerRule};

pub const CONFIG_FILE: &str = "ctxforge.json";
pub const DEFAULT_CONSTITUTION: &str = "CONSTITUTION.md";
pub const DEFAULT_AGENTS_DIR: &str = "agents";
pub const DEFAULT_DOCS_DIR: &str = "context";
pub const DEFAULT_CONSTITUTION_BUDGET: usize = 800;

/// Body lines scanned for the read-only marker.
pub const READ_ONLY_SCAN_LINES: usize = 10;
pub const READ_ONLY_MARKER: &str = "READ-ONLY";
/// Frontmatter `model` value that selects [`Capability::Higher`].
pub const HIGHER_CAPABILITY_MODEL: &str = "higher-capability";

/// Contents of `ctxforge.json`. Every key is optional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusConfig {
    pub constitution: String,
    pub agents_dir: String,
    pub docs_dir: String,
    pub source_globs: Vec<String>,
    pub constitution_budget: usize,
    /// Agent names provided by the host tool rather than the registry.
    pub builtin_agents: Vec<String>,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self {
            constitution: DEFAULT_CONSTITUTION.into(),
            agents_dir: DEFAULT_AGENTS_DIR.into(),
            docs_dir: DEFAULT_DOCS_DIR.into(),
            source_globs: Vec::new(),
            constitution_budget: DEFAULT_CONSTITUTION_BUDGET,
            builtin_agents: Vec::new(),
        }
    }
}

impl CorpusConfig {
    /// Reads `<root>/ctxforge.json`, falling back to defaults when absent.
    pub fn load(root: &Path) -> Result<Self, CorpusError> {
        let path = root.join(CONFIG_FILE);
        if !path.is_file() {
            return Ok(Self::default());
        }
        let text = fs::read_to_string(&path).map_err(|source| CorpusError::Io {
            path: path.clone(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CorpusError::Config { path, source })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    /// Constitution, loaded into every session.
    Tier1,
    /// Specialist agents, loaded per task.
    Tier2,
    /// Knowledge base, retrieved on demand.
    Tier3,
}

impl Tier {
    pub fn label(self) -> &'static str {
        match self {
            Tier::Tier1 => "T1: Constitution",
            Tier::Tier2 => "T2: Specialized Agents",
            Tier::Tier3 => "T3: Knowledge Base",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Capability {
    Higher,
    Standard,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeDoc {
    pub path: String,
    pub title: String,
    pub subsystem: String,
    pub keywords: BTreeSet<String>,
    pub headings: Vec<String>,
    pub source_globs: Vec<String>,
    pub line_count: usize,
}

impl KnowledgeDoc {
    pub fn tier(&self) -> Tier {
        Tier::Tier3
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentSpec {
    pub name: String,
    pub description: String,
    pub tools: Vec<String>,
    pub capability: Capability,
    pub domain_keywords: BTreeSet<String>,
    pub read_only: bool,
    pub line_count: usize,
    pub path: String,
    /// Level-1 and level-2 heading texts of the body.
    pub headings: Vec<String>,
}

impl AgentSpec {
    pub fn tier(&self) -> Tier {
        Tier::Tier2
    }

    /// Renders the spec back to Markdown. Parsing the output yields an equal
    /// spec as long as `line_count` is at least the rendered minimum.
    pub fn to_markdown(&self) -> String {
        let mut lines: Vec<String> = vec!["---".into(), format!("name: {}", self.name)];
        if !self.description.is_empty() {
            lines.push(format!("description: {}", self.description));
        }
        if !self.tools.is_empty() {
            lines.push(format!("tools: {}", self.tools.join(", ")));
        }
        let model = match self.capability {
            Capability::Higher => HIGHER_CAPABILITY_MODEL,
            Capability::Standard => "standard",
        };
        lines.push(format!("model: {model}"));
        lines.push("---".into());
        if self.read_only {
            lines.push(format!("**This agent is {READ_ONLY_MARKER}.**"));
        }
        for h in &self.headings {
            lines.push(format!("## {h}"));
        }
        while lines.len() < self.line_count {
            lines.push(String::new());
        }
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constitution {
    pub path: String,
    pub line_count: usize,
    /// Root-relative targets of local `.md` links.
    pub doc_links: Vec<String>,
    pub trigger_rules: Vec<TriggerRule>,
    pub trigger_diagnostics: Vec<RowDiagnostic>,
    pub trigger_section_found: bool,
    /// Distinct tokens of the whole constitution text.
    pub tokens: BTreeSet<String>,
    pub budget: usize,
}

impl Constitution {
    pub fn parse(text: &str, path: &str, budget: usize) -> Self {
        let table = parse_trigger_table(text);
        let base = Path::new(path).parent().unwrap_or(Path::new(""));
        let mut doc_links: Vec<String> = Vec::new();
        for target in markdown::link_targets(text) {
            if let Some(resolved) = resolve_local_md_link(base, &target) {
                if !doc_links.contains(&resolved) {
                    doc_links.push(resolved);
                }
            }
        }
        Self {
            path: path.to_owned(),
            line_count: line_count(text),
            doc_links,
            trigger_rules: table.rules,
            trigger_diagnostics: table.diagnostics,
            trigger_section_found: table.section_found,
            tokens: tokenize(text).into_iter().collect(),
            budget,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextCorpus {
    pub root: PathBuf,
    pub constitution: Constitution,
    pub agents: Vec<AgentSpec>,
    pub docs: Vec<KnowledgeDoc>,
    /// Files that failed to parse.
    pub diagnostics: Vec<ParseError>,
    /// SHA-256 over the path and content of every file read.
    pub fingerprint: String,
}

impl ContextCorpus {
    /// File counts per tier, in tier order.
    pub fn tier_counts(&self) -> [usize; 3] {
        [1, self.agents.len(), self.docs.len()]
    }

    pub fn tier_lines(&self) -> [usize; 3] {
        [
            self.constitution.line_count,
            self.agents.iter().map(|a| a.line_count).sum(),
            self.docs.iter().map(|d| d.line_count).sum(),
        ]
    }

    pub fn total_files(&self) -> usize {
        self.tier_counts().iter().sum()
    }

    pub fn total_lines(&self) -> usize {
        self.tier_lines().iter().sum()
    }

    pub fn agent(&self, name: &str) -> Option<&AgentSpec> {
        self.agents.iter().find(|a| a.name == name)
    }

    /// Paths of every corpus member (constitution, agents, docs).
    pub fn member_paths(&self) -> BTreeSet<&str> {
        std::iter::once(self.constitution.path.as_str())
            .chain(self.agents.iter().map(|a| a.path.as_str()))
            .chain(self.docs.iter().map(|d| d.path.as_str()))
            .collect()
    }
}

/// Lowercases and joins alphanumeric runs with `-`: `Drop-System` and
/// `drop_system` both become `drop-system`.
pub fn normalize_subsystem_key(raw: &str) -> String {
    raw.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|s| !s.is_empty())
        .collect::<Vec<_>>()
        .join("-")
}

fn is_agent_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .split('-')
            .all(|part| !part.is_empty() && part.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit()))
}

fn file_stem(path: &str) -> String {
    Path::new(path)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub fn parse_agent_spec(text: &str, path: &str) -> Result<AgentSpec, ParseError> {
    let split = frontmatter::split(text).map_err(|e| ParseError::new(path, e.line, e.message))?;
    let Some(fm) = split.frontmatter else {
        return Err(ParseError::new(path, 1, "missing `---` frontmatter block"));
    };
    let name = fm.scalar("name").unwrap_or_default().trim().to_owned();
    if name.is_empty() {
        return Err(ParseError::new(path, 1, "frontmatter has no `name`"));
    }
    if !is_agent_name(&name) {
        return Err(ParseError::new(
            path,
            1,
            format!("agent name `{name}` is not lowercase-hyphenated"),
        ));
    }
    let description = fm.scalar("description").unwrap_or_default();
    let tools = fm.list("tools");
    let capability = match fm.scalar("model").as_deref().map(str::trim) {
        Some(HIGHER_CAPABILITY_MODEL) => Capability::Higher,
        _ => Capability::Standard,
    };
    let read_only = split
        .body
        .lines()
        .take(READ_ONLY_SCAN_LINES)
        .any(|l| l.contains(READ_ONLY_MARKER));
    let headings: Vec<String> = markdown::headings(split.body)
        .into_iter()
        .filter(|h| h.level <= 2)
        .map(|h| h.text)
        .collect();

    let mut domain_keywords: BTreeSet<String> = tokenize(&name).into_iter().collect();
    domain_keywords.extend(tokenize(&description));
    for h in &headings {
        domain_keywords.extend(tokenize(h));
    }

    Ok(AgentSpec {
        name,
        description,
        tools,
        capability,
        domain_keywords,
        read_only,
        line_count: line_count(text),
        path: path.to_owned(),
        headings,
    })
}

/// Normalizes frontmatter keywords: lowercase, whitespace-split, length >= 2.
fn normalize_keywords(raw: &[String]) -> BTreeSet<String> {
    raw.iter()
        .flat_map(|k| {
            k.to_lowercase()
                .split_whitespace()
                .map(str::to_owned)
                .collect::<Vec<_>>()
        })
        .filter(|k| k.chars().count() >= 2)
        .collect()
}

pub fn parse_knowledge_doc(text: &str, path: &str) -> Result<KnowledgeDoc, ParseError> {
    let split = frontmatter::split(text).map_err(|e| ParseError::new(path, e.line, e.message))?;
    let fm = split.frontmatter.unwrap_or_default();
    let stem = file_stem(path);

    let subsystem = match fm.scalar("subsystem") {
        Some(raw) if !raw.trim().is_empty() => normalize_subsystem_key(&raw),
        _ => normalize_subsystem_key(&stem),
    };
    if subsystem.is_empty() {
        return Err(ParseError::new(path, 1, "cannot derive a subsystem key"));
    }

    let hs = markdown::headings(split.body);
    let title = hs
        .iter()
        .find(|h| h.level == 1)
        .map(|h| h.text.clone())
        .unwrap_or_else(|| stem.clone());

    Ok(KnowledgeDoc {
        path: path.to_owned(),
        title,
        subsystem,
        keywords: normalize_keywords(&fm.list("keywords")),
        headings: hs.into_iter().map(|h| h.text).collect(),
        source_globs: fm.list("source_globs"),
        line_count: line_count(text),
    })
}

fn rel_string(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join("/")
}

/// Resolves a link target against `base` (root-relative directory) and
/// returns the root-relative path, or `None` for external or non-Markdown
/// links.
fn resolve_local_md_link(base: &Path, target: &str) -> Option<String> {
    if target.contains("://") || target.starts_with('#') || target.starts_with("mailto:") {
        return None;
    }
    let target = target.split('#').next().unwrap_or("");
    if !target.to_ascii_lowercase().ends_with(".md") {
        return None;
    }
    let joined = if let Some(abs) = target.strip_prefix('/') {
        PathBuf::from(abs)
    } else {
        base.join(target)
    };
    let mut parts: Vec<String> = Vec::new();
    for c in joined.components() {
        match c {
            Component::Normal(p) => parts.push(p.to_string_lossy().into_owned()),
            Component::ParentDir => {
                parts.pop();
            }
            _ => {}
        }
    }
    Some(parts.join("/"))
}

fn markdown_files(root: &Path, dir: &Path) -> Vec<(String, PathBuf)> {
    if !dir.is_dir() {
        return Vec::new();
    }
    let mut files: Vec<(String, PathBuf)> = WalkDir::new(dir)
        .follow_links(true)
        .into_iter()
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file())
        .filter(|e| {
            e.path()
                .extension()
                .is_some_and(|ext| ext.eq_ignore_ascii_case("md"))
        })
        .map(|e| (rel_string(root, e.path()), e.path().to_path_buf()))
        .collect();
    files.sort();
    files
}

/// Parses the corpus under `root`. Members are ordered by path. Files that
/// fail to parse become diagnostics; a missing constitution or duplicate
/// subsystem/agent names are fatal.
pub fn parse_corpus(root: &Path, config: &CorpusConfig) -> Result<ContextCorpus, CorpusError> {
    if !root.is_dir() {
        return Err(CorpusError::MissingRoot(root.to_path_buf()));
    }
    let constitution_path = root.join(&config.constitution);
    if !constitution_path.is_file() {
        return Err(CorpusError::MissingConstitution(constitution_path));
    }
    let constitution_rel = rel_string(root, &constitution_path);
    let constitution_bytes = fs::read(&constitution_path).map_err(|source| CorpusError::Io {
        path: constitution_path.clone(),
        source,
    })?;

    let mut hasher = Sha256::new();
    let mut absorb = |rel: &str, bytes: &[u8]| {
        hasher.update((rel.len() as u64).to_le_bytes());
        hasher.update(rel.as_bytes());
        hasher.update((bytes.len() as u64).to_le_bytes());
        hasher.update(bytes);
    };
    absorb(&constitution_rel, &constitution_bytes);
    let constitution_text = String::from_utf8_lossy(&constitution_bytes);
    let constitution = Constitution::parse(&constitution_text, &constitution_rel, config.constitution_budget);

    let mut diagnostics = Vec::new();
    let mut read_member = |rel: &str, abs: &Path, diagnostics: &mut Vec<ParseError>| -> Option<String> {
        match fs::read(abs) {
            Ok(bytes) => {
                absorb(rel, &bytes);
                match String::from_utf8(bytes) {
                    Ok(text) => Some(text),
                    Err(_) => {
                        diagnostics.push(ParseError::new(rel, 1, "file is not valid UTF-8"));
                        None
                    }
                }
            }
            Err(e) => {
                diagnostics.push(ParseError::new(rel, 0, format!("unreadable: {e}")));
                None
            }
        }
    };

    let mut agents: Vec<AgentSpec> = Vec::new();
    let mut seen_agents: BTreeMap<String, String> = BTreeMap::new();
    for (rel, abs) in markdown_files(root, &root.join(&config.agents_dir)) {
        if rel == constitution_rel {
            continue;
        }
        let Some(text) = read_member(&rel, &abs, &mut diagnostics) else {
            continue;
        };
        match parse_agent_spec(&text, &rel) {
            Ok(agent) => {
                if let Some(first) = seen_agents.get(&agent.name) {
                    return Err(CorpusError::DuplicateAgent {
                        name: agent.name,
                        first: first.clone(),
                        second: rel,
                    });
                }
                seen_agents.insert(agent.name.clone(), rel);
                agents.push(agent);
            }
            Err(e) => diagnostics.push(e),
        }
    }

    let mut docs: Vec<KnowledgeDoc> = Vec::new();
    let mut seen_subsystems: BTreeMap<String, String> = BTreeMap::new();
    for (rel, abs) in markdown_files(root, &root.join(&config.docs_dir)) {
        if rel == constitution_rel || seen_agents.values().any(|p| *p == rel) {
            continue;
        }
        let Some(text) = read_member(&rel, &abs, &mut diagnostics) else {
            continue;
        };
        match parse_knowledge_doc(&text, &rel) {
            Ok(doc) => {
                if let Some(first) = seen_subsystems.get(&doc.subsystem) {
                    return Err(CorpusError::DuplicateSubsystem {
                        key: doc.subsystem,
                        first: first.clone(),
                        second: rel,
                    });
                }
                seen_subsystems.insert(doc.subsystem.clone(), rel);
                docs.push(doc);
            }
            Err(e) => diagnostics.push(e),
        }
    }

    Ok(ContextCorpus {
        root: root.to_path_buf(),
        constitution,
        agents,
        docs,
        diagnostics,
        fingerprint: hex::encode(hasher.finalize()),
    })
}
