//! JSON-RPC 2.0 over newline-delimited stdio, speaking the MCP subset
//! needed to list and call the retrieval tools.
//!
//! Requests are handled strictly one at a time, in arrival order.
//! Notifications (messages without an `id`) never produce output.

use std::io::{self, BufRead, Write};

use ctxforge_core::ContextIndex;
use serde_json::{json, Map, Value};

use crate::tools::{call_tool, descriptors};

/// MCP revision this server implements.
pub const PROTOCOL_VERSION: &str = "2024-11-05";
pub const SERVER_NAME: &str = "ctxforge";

pub const PARSE_ERROR: i64 = -32700;
pub const INVALID_REQUEST: i64 = -32600;
pub const METHOD_NOT_FOUND: i64 = -32601;
pub const INVALID_PARAMS: i64 = -32602;

pub struct Server {
    index: ContextIndex,
}

fn error_response(id: Value, code: i64, message: impl Into<String>) -> Value {
    json!({"jsonrpc": "2.0", "id": id, "error": {"code": code, "message": message.into()}})
}

fn result_response(id: Value, result: Value) -> Value {
    json!({"jsonrpc": "2.0", "id": id, "result": result})
}

fn text_result(text: String, is_error: bool) -> Value {
    json!({"content": [{"type": "text", "text": text}], "isError": is_error})
}

impl Server {
    pub fn new(index: ContextIndex) -> Self {
        Self { index }
    }

    pub fn index(&self) -> &ContextIndex {
        &self.index
    }

    /// Handles one raw line; returns the response line, if any.
    pub fn handle_line(&self, line: &str) -> Option<String> {
        let response = match serde_json::from_str::<Value>(line) {
            Ok(msg) => self.handle_message(&msg),
            Err(e) => Some(error_response(Value::Null, PARSE_ERROR, format!("parse error: {e}"))),
        };
        response.map(|v| v.to_string())
    }

    pub fn handle_message(&self, msg: &Value) -> Option<Value> {
        let Some(obj) = msg.as_object() else {
            return Some(error_response(Value::Null, INVALID_REQUEST, "request must be a JSON object"));
        };
        let id = obj.get("id").cloned();
        let valid_id = matches!(id, None | Some(Value::String(_)) | Some(Value::Number(_)) | Some(Value::Null));
        let Some(method) = obj.get("method").and_then(Value::as_str) else {
            return Some(error_response(
                if valid_id { id.unwrap_or(Value::Null) } else { Value::Null },
                INVALID_REQUEST,
                "missing `method`",
            ));
        };
        if !valid_id {
            return Some(error_response(Value::Null, INVALID_REQUEST, "invalid `id`"));
        }
        // Notifications get no response.
        let id = id?;
        let params = obj.get("params");

        let response = match method {
            "initialize" => result_response(
                id,
                json!({
                    "protocolVersion": PROTOCOL_VERSION,
                    "capabilities": {"tools": {"listChanged": false}},
                    "serverInfo": {"name": SERVER_NAME, "version": env!("CARGO_PKG_VERSION")}
                }),
            ),
            "ping" => result_response(id, json!({})),
            "tools/list" => result_response(id, json!({"tools": descriptors()})),
            "tools/call" => self.tools_call(id, params),
            other => error_response(id, METHOD_NOT_FOUND, format!("method not found: {other}")),
        };
        Some(response)
    }

    fn tools_call(&self, id: Value, params: Option<&Value>) -> Value {
        let Some(params) = params.and_then(Value::as_object) else {
            return error_response(id, INVALID_PARAMS, "tools/call requires params");
        };
        let Some(name) = params.get("name").and_then(Value::as_str) else {
            return error_response(id, INVALID_PARAMS, "tools/call requires a string `name`");
        };
        let empty = Map::new();
        let args = match params.get("arguments") {
            None | Some(Value::Null) => &empty,
            Some(Value::Object(m)) => m,
            Some(_) => return error_response(id, INVALID_PARAMS, "`arguments` must be an object"),
        };
        match call_tool(&self.index, name, args) {
            Ok(text) => result_response(id, text_result(text, false)),
            Err(e) => result_response(id, text_result(e.to_string(), true)),
        }
    }

    /// Serves until `input` reaches end of stream.
    pub fn serve<R: BufRead, W: Write>(&self, input: R, mut output: W) -> io::Result<()> {
        for line in input.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            if let Some(response) = self.handle_line(&line) {
                output.write_all(response.as_bytes())?;
                output.write_all(b"\n")?;
                output.flush()?;
            }
        }
        Ok(())
    }
}
