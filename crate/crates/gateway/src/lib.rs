//! Gateway to a ctxforge corpus: the `ctxforge` CLI and an MCP-compatible
//! JSON-RPC server over stdio exposing the five retrieval tools.

pub mod cli;
pub mod lint;
pub mod server;
pub mod tools;
pub mod workspace;

pub use cli::run;
pub use server::Server;
