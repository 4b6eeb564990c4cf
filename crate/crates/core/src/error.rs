use std::path::PathBuf;

use thiserror::Error;

/// Fatal corpus errors. Per-file parse failures are reported as
/// [`ParseError`] diagnostics instead.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus root {0} does not exist")]
    MissingRoot(PathBuf),
    #[error("constitution not found at {0}")]
    MissingConstitution(PathBuf),
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config {path}: {source}")]
    Config {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("duplicate subsystem `{key}` in {first} and {second}")]
    DuplicateSubsystem {
        key: String,
        first: String,
        second: String,
    },
    #[error("duplicate agent `{name}` in {first} and {second}")]
    DuplicateAgent {
        name: String,
        first: String,
        second: String,
    },
}

/// A document that could not be parsed.
#[derive(Debug, Clone, PartialEq, Eq, Error, serde::Serialize, serde::Deserialize)]
#[error("{path}:{line}: {message}")]
pub struct ParseError {
    pub path: String,
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(path: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
