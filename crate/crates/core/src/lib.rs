//! Infrastructure for codified agent context: a constitution loaded into
//! every session, specialist agent specs, and a per-subsystem knowledge base
//! served through keyword retrieval.
//!
//! The crate parses such a corpus, indexes it, routes tasks to agents,
//! detects documentation drift from version-control history and computes
//! interaction metrics from session logs. It never calls a model.

pub mod corpus;
pub mod drift;
pub mod error;
pub mod frontmatter;
pub mod glob;
pub mod index;
pub mod markdown;
pub mod metrics;
pub mod orchestrator;
pub mod scale;
pub mod tokenize;
pub mod triggers;

pub use corpus::{
    parse_agent_spec, parse_corpus, parse_knowledge_doc, AgentSpec, Capability, Constitution,
    ContextCorpus, CorpusConfig, KnowledgeDoc, Tier,
};
pub use drift::{collect_changes, detect_drift, render_warning, ChangeEntry, ChangeLog, DriftReport};
pub use error::{CorpusError, ParseError};
pub use index::{ContextIndex, RelevanceHit, SubsystemFiles, SubsystemHit};
pub use metrics::{compute_stats, ingest_logs, InteractionRecord, SessionStats};
pub use orchestrator::{route, suggest_agent, RoutingDecision, RoutingReason};
pub use scale::{scale_report, ScaleReport};
pub use tokenize::tokenize;
pub use triggers::{parse_trigger_table, Phase, TriggerRule};
