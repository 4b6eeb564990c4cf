//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 drift detected,
//! 3 lint failure.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use chrono::Utc;
use clap::{Parser, Subcommand, ValueEnum};
use ctxforge_core::drift::{collect_changes, collect_changes_from_file, DEFAULT_WINDOW_DAYS};
use ctxforge_core::index::DEFAULT_SEARCH_K;
use ctxforge_core::metrics::{compute_stats, ingest_logs, log_files, SessionStats};
use ctxforge_core::orchestrator::DEFAULT_SUGGEST_K;
use ctxforge_core::scale::{scale_report, ScaleReport};
use ctxforge_core::{detect_drift, render_warning, route, Phase, RoutingDecision};
use serde::Serialize;

use crate::lint::{has_errors, lint_constitution};
use crate::server::Server;
use crate::tools;
use crate::workspace::Workspace;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DRIFT: i32 = 2;
pub const EXIT_LINT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ctxforge", version, about = "Index, query and check a codified agent-context corpus")]
pub struct Cli {
    /// Corpus root directory.
    #[arg(long, global = true, env = "CTXFORGE_ROOT", default_value = ".")]
    pub root: PathBuf,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PhaseArg {
    Pre,
    Post,
}

impl From<PhaseArg> for Phase {
    fn from(p: PhaseArg) -> Self {
        match p {
            PhaseArg::Pre => Phase::PreChange,
            PhaseArg::Post => Phase::PostChange,
        }
    }
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("`{s}` is not a positive integer")),
    }
}

fn positive_u32(s: &str) -> Result<u32, String> {
    match s.parse::<u32>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("`{s}` is not a positive integer")),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the index and persist the snapshot next to the config.
    Index,
    /// Keyword search over knowledge documents.
    Query {
        text: String,
        #[arg(long = "k", default_value_t = DEFAULT_SEARCH_K, value_parser = positive)]
        k: usize,
    },
    /// Subsystems relevant to a task.
    Find {
        task: String,
        #[arg(long = "k", default_value_t = DEFAULT_SEARCH_K, value_parser = positive)]
        k: usize,
    },
    /// List subsystem keys and doc counts.
    Subsystems,
    /// Documents for a subsystem key.
    Files { key: String },
    /// Rank specialist agents for a task.
    SuggestAgent {
        task: String,
        #[arg(long = "k", default_value_t = DEFAULT_SUGGEST_K, value_parser = positive)]
        k: usize,
    },
    /// Apply the constitution's trigger table.
    Route {
        #[arg(long, value_enum)]
        phase: PhaseArg,
        #[arg(long)]
        task: Option<String>,
        paths: Vec<String>,
    },
    /// Report subsystems whose sources changed without a doc update.
    Drift {
        #[arg(long = "since-days", default_value_t = DEFAULT_WINDOW_DAYS, value_parser = positive_u32)]
        since_days: u32,
        /// Exported change log instead of running git.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Interaction metrics from JSONL session logs.
    Metrics { dir: PathBuf },
    /// Check the constitution.
    Lint,
    /// Per-tier sizes and the knowledge-to-code ratio.
    Scale {
        /// Source globs (defaults to `source_globs` from the config).
        #[arg(long = "source")]
        source: Vec<String>,
    },
    /// Serve the retrieval tools over stdio JSON-RPC.
    Serve,
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

// Write failures on the output streams are not recoverable here.
macro_rules! say {
    ($w:expr, $($arg:tt)*) => {{ let _ = writeln!($w, $($arg)*); }};
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run(argv: &[String], input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    let mut io = Io { out, err };
    execute(cli, input, &mut io)
}

fn open(root: &Path, io: &mut Io<'_>) -> Option<Workspace> {
    match Workspace::open(root) {
        Ok(ws) => Some(ws),
        Err(e) => {
            say!(io.err, "error: {e}");
            None
        }
    }
}

fn emit_json<T: Serialize>(io: &mut Io<'_>, value: &T) {
    say!(io.out, "{}", tools::to_text(value));
}

fn execute(cli: Cli, input: &mut dyn BufRead, io: &mut Io<'_>) -> i32 {
    let json = cli.json;
    if let Command::Metrics { dir } = &cli.command {
        return metrics(&cli.root, dir, json, io);
    }
    let Some(mut ws) = open(&cli.root, io) else {
        return EXIT_USAGE;
    };

    match cli.command {
        Command::Index => match ws.rebuild_and_persist() {
            Ok(path) => {
                if json {
                    emit_json(io, &serde_json::json!({
                        "path": path.display().to_string(),
                        "docs": ws.index.doc_keywords.len(),
                        "agents": ws.index.agent_keywords.len(),
                        "fingerprint": ws.index.corpus_fingerprint,
                    }));
                } else {
                    say!(
                        io.out,
                        "indexed {} docs and {} agents into {}",
                        ws.index.doc_keywords.len(),
                        ws.index.agent_keywords.len(),
                        path.display()
                    );
                }
                EXIT_OK
            }
            Err(e) => {
                say!(io.err, "error: cannot write index: {e}");
                EXIT_USAGE
            }
        },
        Command::Query { text, k } => {
            let payload = tools::search(&ws.index, &text, k);
            if json {
                emit_json(io, &payload);
            } else if !payload.found {
                say!(io.out, "no results for \"{text}\"");
            } else {
                for h in &payload.hits {
                    say!(
                        io.out,
                        "{:>3}  {}  [{}]  {}",
                        h.score,
                        h.target,
                        h.subsystem.as_deref().unwrap_or("-"),
                        h.matched_tokens.join(", ")
                    );
                }
            }
            EXIT_OK
        }
        Command::Find { task, k } => {
            let payload = tools::find(&ws.index, &task, k);
            if json {
                emit_json(io, &payload);
            } else if !payload.found {
                say!(io.out, "no relevant context for \"{task}\"");
            } else {
                for s in &payload.subsystems {
                    say!(io.out, "{:>3}  {}", s.score, s.subsystem);
                    for h in &s.hits {
                        say!(io.out, "       {}  ({})", h.target, h.matched_tokens.join(", "));
                    }
                }
            }
            EXIT_OK
        }
        Command::Subsystems => {
            let payload = tools::list_subsystems(&ws.index);
            if json {
                emit_json(io, &payload);
            } else {
                for s in &payload.subsystems {
                    say!(io.out, "{}\t{}", s.subsystem, s.docs);
                }
            }
            EXIT_OK
        }
        Command::Files { key } => {
            let payload = tools::files_for_subsystem(&ws.index, &key);
            if json {
                emit_json(io, &payload);
            } else if !payload.found {
                say!(io.out, "not found: no knowledge docs for subsystem `{key}`");
            } else {
                for f in &payload.files {
                    say!(io.out, "{f}");
                }
            }
            EXIT_OK
        }
        Command::SuggestAgent { task, k } => {
            let payload = tools::suggest(&ws.index, &task, k);
            if json {
                emit_json(io, &payload);
            } else if !payload.found {
                say!(io.out, "no agent suggestion for \"{task}\"");
            } else {
                for d in &payload.suggestions {
                    say!(io.out, "{:>3}  {}  ({})", d.score, d.agent, d.evidence.join(", "));
                }
            }
            EXIT_OK
        }
        Command::Route { phase, task, paths } => {
            let phase: Phase = phase.into();
            let decisions = route(&ws.corpus.constitution.trigger_rules, phase, &paths, task.as_deref());
            if json {
                #[derive(Serialize)]
                struct RoutePayload<'a> {
                    phase: Phase,
                    decisions: &'a [RoutingDecision],
                }
                emit_json(io, &RoutePayload { phase, decisions: &decisions });
            } else if decisions.is_empty() {
                say!(io.out, "no trigger fired");
            } else {
                for d in &decisions {
                    say!(io.out, "{}  ({})", d.agent, d.evidence.join(", "));
                }
            }
            EXIT_OK
        }
        Command::Drift { since_days, log } => {
            let now = Utc::now();
            let changes = match &log {
                Some(path) => collect_changes_from_file(path, since_days, now),
                None => collect_changes(&ws.root, since_days),
            };
            let changes = match changes {
                Ok(c) => c,
                Err(e) => {
                    say!(io.err, "error: {e}");
                    return EXIT_USAGE;
                }
            };
            let report = detect_drift(&ws.corpus, &changes, since_days, now);
            if json {
                emit_json(io, &report);
            } else {
                let _ = write!(io.out, "{}", render_warning(&report));
            }
            if report.is_stale() {
                EXIT_DRIFT
            } else {
                EXIT_OK
            }
        }
        Command::Metrics { .. } => unreachable!("handled above"),
        Command::Lint => {
            let diagnostics = lint_constitution(&ws.corpus, &ws.index);
            if json {
                emit_json(io, &diagnostics);
            } else {
                for d in &diagnostics {
                    say!(io.out, "{d}");
                }
                if diagnostics.is_empty() {
                    say!(io.out, "ok");
                }
            }
            if has_errors(&diagnostics) {
                EXIT_LINT
            } else {
                EXIT_OK
            }
        }
        Command::Scale { source } => {
            let globs = if source.is_empty() { ws.config.source_globs.clone() } else { source };
            let report = scale_report(&ws.corpus, (!globs.is_empty()).then_some(globs.as_slice()));
            if json {
                emit_json(io, &report);
            } else {
                print_scale(io, &report);
            }
            EXIT_OK
        }
        Command::Serve => {
            let server = Server::new(ws.index);
            match server.serve(input, &mut *io.out) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    say!(io.err, "error: {e}");
                    EXIT_USAGE
                }
            }
        }
    }
}

fn percent(f: Option<f64>) -> String {
    f.map_or_else(|| "-".to_owned(), |f| format!("{:.1}%", f * 100.0))
}

fn print_scale(io: &mut Io<'_>, r: &ScaleReport) {
    say!(io.out, "{:<26} {:>6} {:>8} {:>10}", "Tier", "Files", "Lines", "% of code");
    for t in &r.tiers {
        say!(io.out, "{:<26} {:>6} {:>8} {:>10}", t.label, t.files, t.lines, percent(t.fraction_of_code));
    }
    say!(
        io.out,
        "{:<26} {:>6} {:>8} {:>10}",
        "Total context",
        r.total_files,
        r.total_lines,
        percent(r.knowledge_to_code_ratio)
    );
    if let Some(s) = &r.source {
        say!(io.out, "source: {} files, {} lines", s.files, s.lines);
    }
    for n in &r.notes {
        say!(io.out, "note: {n}");
    }
}

fn metrics(root: &Path, dir: &Path, json: bool, io: &mut Io<'_>) -> i32 {
    if !dir.is_dir() {
        say!(io.err, "error: {} is not a directory", dir.display());
        return EXIT_USAGE;
    }
    let (registry, builtins) = match Workspace::open(root) {
        Ok(ws) => (ws.corpus.agents, ws.config.builtin_agents),
        Err(e) => {
            say!(io.err, "warning: no agent registry ({e}); every invocation is unclassifiable");
            (Vec::new(), Vec::new())
        }
    };
    let ingested = ingest_logs(&log_files(dir));
    for (path, e) in &ingested.file_errors {
        say!(io.err, "warning: cannot read {}: {e}", path.display());
    }
    let mut stats = compute_stats(&ingested.records, &registry, &builtins);
    stats.skipped_records = ingested.skipped_records;
    if json {
        emit_json(io, &stats);
    } else {
        print_metrics(io, &stats);
    }
    EXIT_OK
}

fn print_metrics(io: &mut Io<'_>, s: &SessionStats) {
    let rate = |v: Option<f64>| v.map_or_else(|| "undefined".to_owned(), |v| format!("{v:.2}"));
    say!(io.out, "{:<28} {:>8}", "Sessions", s.sessions);
    say!(io.out, "{:<28} {:>8}", "Human prompts", s.human_prompts);
    say!(io.out, "{:<28} {:>8}", "Agent invocations", s.agent_invocations);
    say!(io.out, "{:<28} {:>8}", "Agent turns", s.agent_turns);
    say!(io.out, "{:<28} {:>8}", "Total interactions", s.total);
    say!(io.out, "{:<28} {:>8}", "Prompts per session", rate(s.prompts_per_session));
    say!(io.out, "{:<28} {:>8}", "Prompts <= 100 words", percent(s.short_prompt_fraction));
    say!(io.out, "{:<28} {:>8}", "Specialist invocations", s.specialist_invocations);
    say!(io.out, "{:<28} {:>8}", "Built-in invocations", s.builtin_invocations);
    say!(io.out, "{:<28} {:>8}", "Unclassifiable invocations", s.unclassifiable_invocations);
    say!(io.out, "{:<28} {:>8}", "Skipped records", s.skipped_records);
    if !s.top_agents.is_empty() {
        say!(io.out, "Top specialists:");
        for a in s.top_agents.iter().take(10) {
            say!(io.out, "  {:<30} {:>6}", a.agent, a.count);
        }
    }
}
