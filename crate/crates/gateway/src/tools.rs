//! The five retrieval tools: descriptors, argument handling and JSON
//! payloads. The CLI prints the same payload strings the wire returns.

use ctxforge_core::index::{DEFAULT_SEARCH_K, SubsystemHit};
use ctxforge_core::orchestrator::DEFAULT_SUGGEST_K;
use ctxforge_core::{suggest_agent, ContextIndex, RelevanceHit, RoutingDecision};
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const LIST_SUBSYSTEMS: &str = "list_subsystems";
pub const GET_FILES_FOR_SUBSYSTEM: &str = "get_files_for_subsystem";
pub const FIND_RELEVANT_CONTEXT: &str = "find_relevant_context";
pub const SEARCH_CONTEXT_DOCUMENTS: &str = "search_context_documents";
pub const SUGGEST_AGENT: &str = "suggest_agent";

pub const TOOL_NAMES: [&str; 5] = [
    LIST_SUBSYSTEMS,
    GET_FILES_FOR_SUBSYSTEM,
    FIND_RELEVANT_CONTEXT,
    SEARCH_CONTEXT_DOCUMENTS,
    SUGGEST_AGENT,
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToolDescriptor {
    pub name: &'static str,
    pub description: &'static str,
    #[serde(rename = "inputSchema")]
    pub input_schema: Value,
}

fn k_schema(default: usize) -> Value {
    json!({
        "type": "integer",
        "minimum": 1,
        "default": default,
        "description": "Maximum number of results"
    })
}

pub fn descriptors() -> Vec<ToolDescriptor> {
    vec![
        ToolDescriptor {
            name: LIST_SUBSYSTEMS,
            description: "List every documented subsystem key with its document count.",
            input_schema: json!({"type": "object", "properties": {}}),
        },
        ToolDescriptor {
            name: GET_FILES_FOR_SUBSYSTEM,
            description: "Knowledge documents for one subsystem key (case-sensitive). found=false means the subsystem is undocumented.",
            input_schema: json!({
                "type": "object",
                "properties": {"key": {"type": "string", "description": "Subsystem key, e.g. save-system"}},
                "required": ["key"]
            }),
        },
        ToolDescriptor {
            name: FIND_RELEVANT_CONTEXT,
            description: "Subsystems relevant to a task description, each with its matching documents.",
            input_schema: json!({
                "type": "object",
                "properties": {"task": {"type": "string"}, "k": k_schema(DEFAULT_SEARCH_K)},
                "required": ["task"]
            }),
        },
        ToolDescriptor {
            name: SEARCH_CONTEXT_DOCUMENTS,
            description: "Keyword search over knowledge documents, ranked by matched query tokens.",
            input_schema: json!({
                "type": "object",
                "properties": {"query": {"type": "string"}, "k": k_schema(DEFAULT_SEARCH_K)},
                "required": ["query"]
            }),
        },
        ToolDescriptor {
            name: SUGGEST_AGENT,
            description: "Specialist agents whose domain matches a task description.",
            input_schema: json!({
                "type": "object",
                "properties": {"task": {"type": "string"}, "k": k_schema(DEFAULT_SUGGEST_K)},
                "required": ["task"]
            }),
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ToolError {
    #[error("unknown tool `{0}`")]
    UnknownTool(String),
    #[error("missing required string argument `{0}`")]
    MissingArgument(&'static str),
    #[error("argument `k` must be a positive integer")]
    InvalidK,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubsystemEntry {
    pub subsystem: String,
    pub docs: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubsystemsPayload {
    pub found: bool,
    pub subsystems: Vec<SubsystemEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FilesPayload {
    pub key: String,
    pub found: bool,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchPayload {
    pub query: String,
    pub found: bool,
    pub hits: Vec<RelevanceHit>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FindPayload {
    pub task: String,
    pub found: bool,
    pub subsystems: Vec<SubsystemHit>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuggestPayload {
    pub task: String,
    pub found: bool,
    pub suggestions: Vec<RoutingDecision>,
}

pub fn list_subsystems(index: &ContextIndex) -> SubsystemsPayload {
    let subsystems: Vec<SubsystemEntry> = index
        .list_subsystems()
        .into_iter()
        .map(|(subsystem, docs)| SubsystemEntry { subsystem, docs })
        .collect();
    SubsystemsPayload {
        found: !subsystems.is_empty(),
        subsystems,
    }
}

pub fn files_for_subsystem(index: &ContextIndex, key: &str) -> FilesPayload {
    let result = index.get_files_for_subsystem(key);
    FilesPayload {
        key: key.to_owned(),
        found: result.is_found(),
        files: result.files().to_vec(),
    }
}

pub fn search(index: &ContextIndex, query: &str, k: usize) -> SearchPayload {
    let hits = index.search_context_documents(query, k);
    SearchPayload {
        query: query.to_owned(),
        found: !hits.is_empty(),
        hits,
    }
}

pub fn find(index: &ContextIndex, task: &str, k: usize) -> FindPayload {
    let subsystems = index.find_relevant_context(task, k);
    FindPayload {
        task: task.to_owned(),
        found: !subsystems.is_empty(),
        subsystems,
    }
}

pub fn suggest(index: &ContextIndex, task: &str, k: usize) -> SuggestPayload {
    let suggestions = suggest_agent(index, task, k);
    SuggestPayload {
        task: task.to_owned(),
        found: !suggestions.is_empty(),
        suggestions,
    }
}

/// Compact JSON, the exact text carried in a tool result.
pub fn to_text<T: Serialize>(payload: &T) -> String {
    serde_json::to_string(payload).expect("payloads serialize")
}

fn string_arg(args: &Map<String, Value>, name: &'static str) -> Result<String, ToolError> {
    args.get(name)
        .and_then(Value::as_str)
        .map(str::to_owned)
        .ok_or(ToolError::MissingArgument(name))
}

fn k_arg(args: &Map<String, Value>, default: usize) -> Result<usize, ToolError> {
    match args.get("k") {
        None | Some(Value::Null) => Ok(default),
        Some(v) => match v.as_u64() {
            Some(k) if k >= 1 => Ok(usize::try_from(k).unwrap_or(usize::MAX)),
            _ => Err(ToolError::InvalidK),
        },
    }
}

/// Runs tool `name` and returns its payload text.
pub fn call_tool(index: &ContextIndex, name: &str, args: &Map<String, Value>) -> Result<String, ToolError> {
    match name {
        LIST_SUBSYSTEMS => Ok(to_text(&list_subsystems(index))),
        GET_FILES_FOR_SUBSYSTEM => Ok(to_text(&files_for_subsystem(index, &string_arg(args, "key")?))),
        FIND_RELEVANT_CONTEXT => {
            let task = string_arg(args, "task")?;
            Ok(to_text(&find(index, &task, k_arg(args, DEFAULT_SEARCH_K)?)))
        }
        SEARCH_CONTEXT_DOCUMENTS => {
            let query = string_arg(args, "query")?;
            Ok(to_text(&search(index, &query, k_arg(args, DEFAULT_SEARCH_K)?)))
        }
        SUGGEST_AGENT => {
            let task = string_arg(args, "task")?;
            Ok(to_text(&suggest(index, &task, k_arg(args, DEFAULT_SUGGEST_K)?)))
        }
        other => Err(ToolError::UnknownTool(other.to_owned())),
    }
}
