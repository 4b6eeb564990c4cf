//! Corpus and log generators shared by the gateway test targets.

use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The small hand-written corpus checked in under `tests/fixtures/demo`.
pub fn demo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/demo")
}

pub fn copy_tree(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for entry in fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_tree(&entry.path(), &target);
        } else {
            fs::copy(entry.path(), target).unwrap();
        }
    }
}

/// A writable copy of the demo corpus, without any cached index.
pub fn demo_copy() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    copy_tree(&demo_root(), dir.path());
    let _ = fs::remove_file(dir.path().join(".ctxforge-index.json"));
    dir
}

pub fn write(root: &Path, rel: &str, text: &str) {
    let path = root.join(rel);
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, text).unwrap();
}

fn pad(mut lines: Vec<String>, target: usize, filler: impl Fn(usize) -> String) -> String {
    assert!(lines.len() <= target, "content already longer than {target} lines");
    let mut n = 0;
    while lines.len() < target {
        n += 1;
        lines.push(filler(n));
    }
    let mut text = lines.join("\n");
    text.push('\n');
    text
}

/// Trigger table rows in the dialect the parser reads.
pub const TRIGGER_ROWS: [&str; 5] = [
    "| Pre-change | Network, sync | `network-protocol-designer` |",
    "| Pre-change | Coordinates, camera | `coordinate-wizard` |",
    "| Pre-change | Abilities, src/Abilities/** | `ability-designer` |",
    "| Post-change | Architecture, design, src/Core/** | `systems-designer` |",
    "| Post-change | src/Ecs/**, src/Network/** | `code-reviewer-game-dev` |",
];

/// (name, higher capability, lines, description)
pub const AGENTS: [(&str, bool, usize, &str); 19] = [
    ("network-protocol-designer", true, 915, "Sync, determinism and network protocol design for multiplayer state"),
    ("coordinate-wizard", true, 328, "Isometric coordinate and camera transform specialist"),
    ("code-reviewer-game-dev", true, 1233, "Post-change review of ECS and network code"),
    ("systems-designer", true, 890, "Architecture and design review for cross-cutting gameplay"),
    ("ability-designer", true, 760, "Designs abilities end to end from data assets to effects"),
    ("debugger", true, 650, "Root-cause analysis for crashes and flaky behaviour"),
    ("performance-profiler", true, 524, "Frame budget profiling and allocation hunting"),
    ("ai-behavior-designer", true, 400, "Enemy behaviour trees and decision making"),
    ("level-designer", false, 420, "Brainstorming partner for dungeon config and tiles"),
    ("sprite-2d-artist", false, 380, "Sprite sheets, animation frames and atlas packing"),
    ("ui-layout-specialist", false, 350, "HUD widgets, anchors and scaling"),
    ("shader-author", false, 300, "Shader effects, lighting and post processing"),
    ("audio-designer", false, 115, "Sound cues, mixing and music transitions"),
    ("build-engineer", false, 290, "Build pipeline, packaging and CI"),
    ("test-author", false, 410, "Unit and integration tests for gameplay code"),
    ("save-data-steward", false, 330, "Save slots, migrations and serialization"),
    ("input-handler", false, 260, "Controller, keyboard and rebinding"),
    ("localization-helper", false, 345, "String tables, fonts and translations"),
    ("physics-tuner", false, 400, "Collision layers, knockback and projectile physics"),
];

/// (subsystem key, source directory, extra keywords, lines)
pub const DOCS: [(&str, &str, &str, usize); 34] = [
    ("dungeon-generation", "Dungeon", "procedural, rooms, corridors", 1286),
    ("hud-blueprint", "Hud", "widgets, health, minimap", 1134),
    ("enemy-combat", "Enemies", "aggro, melee, ranged", 779),
    ("boss-fight-framework", "Bosses", "phases, telegraph, arena", 722),
    ("architecture", "Core", "ecs, world, loop", 690),
    ("combat-rng", "Combat", "crit, hash, seed", 400),
    ("save-persistence", "Save", "slots, autosave, migration", 400),
    ("network-sync", "Network", "desync, snapshot, authority", 400),
    ("coordinate-spaces", "Coordinates", "isometric, screen, world", 400),
    ("camera-rig", "Camera", "zoom, follow, shake", 400),
    ("ability-pipeline", "Abilities", "cast, cooldown, effect", 400),
    ("ecs-core", "Ecs", "entity, component, query", 400),
    ("input-handling", "Input", "rebinding, controller, keyboard", 400),
    ("audio-mixing", "Audio", "cues, music, volume", 400),
    ("sprite-atlas", "Sprites", "frames, packing, animation", 400),
    ("tile-rendering", "Tiles", "tilemap, layers, batching", 400),
    ("level-config", "Levels", "biome, difficulty, layout", 400),
    ("inventory", "Inventory", "items, stacks, equipment", 400),
    ("loot-tables", "Loot", "rarity, weights, rewards", 400),
    ("player-movement", "Movement", "dash, velocity, friction", 400),
    ("projectile-physics", "Projectiles", "bullets, collision, knockback", 400),
    ("status-effects", "Status", "poison, stun, burn", 400),
    ("ui-widgets", "Ui", "buttons, panels, focus", 400),
    ("localization", "Localization", "strings, fonts, translation", 400),
    ("build-pipeline", "Build", "packaging, ci, release", 400),
    ("asset-loading", "Assets", "streaming, bundles, cache", 400),
    ("lobby-matchmaking", "Lobby", "rooms, invites, ready", 400),
    ("client-prediction", "Prediction", "rollback, reconcile, latency", 400),
    ("authority-model", "Authority", "server, ownership, validation", 400),
    ("pathfinding", "Pathfinding", "astar, navmesh, grid", 400),
    ("quest-flow", "Quests", "objectives, triggers, journal", 400),
    ("dialogue", "Dialogue", "branching, speakers, portraits", 400),
    ("shader-effects", "Shaders", "lighting, bloom, outline", 400),
    ("performance-budgets", "Performance", "frame, allocation, profiling", 439),
];

pub const CONSTITUTION_LINES: usize = 660;
pub const SOURCE_FILES: usize = 405;
pub const SOURCE_LINES: usize = 108_256;

pub fn constitution_text(lines: usize, extra_rows: &[&str], links: &[(&str, &str)]) -> String {
    let mut out: Vec<String> = vec![
        "# Project Constitution".into(),
        String::new(),
        "## Build".into(),
        String::new(),
        "- `dotnet build` must pass with zero warnings.".into(),
        String::new(),
        "## Knowledge Base".into(),
        String::new(),
    ];
    for (label, target) in links {
        out.push(format!("- [{label}]({target})"));
    }
    out.extend([
        String::new(),
        "## Orchestration Triggers".into(),
        String::new(),
        "| Trigger | Signal | Agent |".into(),
        "|---------|--------|-------|".into(),
    ]);
    out.extend(TRIGGER_ROWS.iter().map(|r| (*r).to_owned()));
    out.extend(extra_rows.iter().map(|r| (*r).to_owned()));
    out.extend([String::new(), "## Conventions".into(), String::new()]);
    pad(out, lines, |n| format!("- Convention {n}: keep handlers short and data-driven."))
}

fn agent_text(name: &str, higher: bool, lines: usize, description: &str) -> String {
    let head = vec![
        "---".to_owned(),
        format!("name: {name}"),
        format!("description: {description}."),
        "tools: Read, Grep, Glob".to_owned(),
        format!("model: {}", if higher { "higher-capability" } else { "standard" }),
        "---".to_owned(),
        String::new(),
        format!("# {} Playbook", name.replace('-', " ")),
        String::new(),
        "## Checklist".into(),
        String::new(),
    ];
    pad(head, lines, |n| format!("- Step {n}: confirm the invariant before editing."))
}

fn doc_text(key: &str, dir: &str, keywords: &str, lines: usize) -> String {
    let head = vec![
        "---".to_owned(),
        format!("subsystem: {key}"),
        format!("keywords: [{keywords}]"),
        format!("source_globs: [src/{dir}/**]"),
        "---".to_owned(),
        format!("# {}", key.replace('-', " ")),
        String::new(),
        "## Core Mechanism".into(),
        String::new(),
        "## Correctness Pillars".into(),
        String::new(),
        "## Known Failure Modes".into(),
        String::new(),
        "| Symptom | Cause | Fix |".into(),
        "|---------|-------|-----|".into(),
    ];
    pad(head, lines, |n| format!("| Symptom {n} | Cause {n} | Fix {n} |"))
}

/// Writes the 54-file reference corpus plus a synthetic C# source tree.
pub fn write_reference_corpus(root: &Path) {
    write_reference_docs(root);
    write_reference_source(root);
}

/// The reference corpus alone: constitution, agents, docs and config.
pub fn write_reference_docs(root: &Path) {
    let links: Vec<(String, String)> = DOCS
        .iter()
        .map(|(key, ..)| (key.replace('-', " "), format!("context/{key}.md")))
        .collect();
    let link_refs: Vec<(&str, &str)> = links.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    write(root, "CONSTITUTION.md", &constitution_text(CONSTITUTION_LINES, &[], &link_refs));
    for (name, higher, lines, description) in AGENTS {
        write(root, &format!("agents/{name}.md"), &agent_text(name, higher, lines, description));
    }
    for (key, dir, keywords, lines) in DOCS {
        write(root, &format!("context/{key}.md"), &doc_text(key, dir, keywords, lines));
    }
    write(
        root,
        "ctxforge.json",
        r#"{"source_globs": ["src/**/*.cs"], "builtin_agents": ["Explore", "Plan", "general-purpose"]}"#,
    );
}

pub fn write_reference_source(root: &Path) {
    let per_file = SOURCE_LINES / SOURCE_FILES;
    for i in 0..SOURCE_FILES {
        let dir = DOCS[i % DOCS.len()].1;
        let lines = if i + 1 == SOURCE_FILES {
            SOURCE_LINES - per_file * (SOURCE_FILES - 1)
        } else {
            per_file
        };
        let body: String = (0..lines).map(|l| format!("// {dir} line {l}\n")).collect();
        write(root, &format!("src/{dir}/File{i:03}.cs"), &body);
    }
}

/// Target totals for the generated session logs.
pub struct SessionTotals {
    pub sessions: usize,
    pub prompts: usize,
    pub invocations: usize,
    pub turns: usize,
    pub short_prompts: usize,
    pub malformed_lines: usize,
}

pub const SESSION_TOTALS: SessionTotals = SessionTotals {
    sessions: 283,
    prompts: 2801,
    invocations: 1197,
    turns: 16_522,
    short_prompts: 2300,
    malformed_lines: 3,
};

/// (agent, invocations); names outside the registry and builtins are unclassifiable.
pub fn invocation_mix() -> Vec<(&'static str, usize)> {
    let mut mix: Vec<(&'static str, usize)> = vec![
        ("code-reviewer-game-dev", 154),
        ("network-protocol-designer", 85),
    ];
    let others: Vec<&str> = AGENTS
        .iter()
        .map(|a| a.0)
        .filter(|n| *n != "code-reviewer-game-dev" && *n != "network-protocol-designer")
        .collect();
    let rest = 193;
    for (i, name) in others.iter().enumerate() {
        let share = rest / others.len() + usize::from(i < rest % others.len());
        mix.push((name, share));
    }
    mix.extend([
        ("Explore", 200),
        ("Plan", 80),
        ("general-purpose", 45),
        ("legacy-asset-helper", 250),
        ("retired-reviewer", 150),
        ("unnamed-helper", 40),
    ]);
    mix
}

fn words(n: usize) -> String {
    (0..n).map(|i| ["fix", "the", "camera", "offset", "now"][i % 5]).collect::<Vec<_>>().join(" ")
}

/// Writes one JSONL file per session into `dir`.
pub fn write_session_logs(dir: &Path, seed: u64) {
    let t = &SESSION_TOTALS;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut prompt_lengths: Vec<usize> = (0..t.prompts)
        .map(|i| if i < t.short_prompts { 1 + (i * 37) % 100 } else { 101 + i % 200 })
        .collect();
    // Boundary cases: exactly at and just over the short-prompt threshold.
    prompt_lengths[0] = 100;
    prompt_lengths[t.short_prompts] = 101;
    prompt_lengths.shuffle(&mut rng);

    let mut agents: Vec<&str> = invocation_mix()
        .into_iter()
        .flat_map(|(a, n)| std::iter::repeat_n(a, n))
        .collect();
    assert_eq!(agents.len(), t.invocations);
    agents.shuffle(&mut rng);

    let mut lines: Vec<Vec<String>> = vec![Vec::new(); t.sessions];
    let share = |total: usize, s: usize| total / t.sessions + usize::from(s < total % t.sessions);
    let (mut p, mut a) = (0, 0);
    for (s, session) in lines.iter_mut().enumerate() {
        let sid = format!("session-{s:03}");
        let mut minute = 0;
        let mut stamp = || {
            minute += 1;
            format!("2025-03-{:02}T{:02}:{:02}:00Z", 1 + s % 28, 8 + minute / 60, minute % 60)
        };
        for _ in 0..share(t.prompts, s) {
            let text = words(prompt_lengths[p]);
            p += 1;
            session.push(
                serde_json::json!({"session_id": sid, "timestamp": stamp(), "kind": "human_prompt", "text": text, "agent": null})
                    .to_string(),
            );
        }
        for _ in 0..share(t.invocations, s) {
            let agent = agents[a];
            a += 1;
            session.push(
                serde_json::json!({"session_id": sid, "timestamp": stamp(), "kind": "agent_invocation", "text": null, "agent": agent})
                    .to_string(),
            );
        }
        for _ in 0..share(t.turns, s) {
            session.push(
                serde_json::json!({"session_id": sid, "timestamp": stamp(), "kind": "agent_turn", "text": null, "agent": null})
                    .to_string(),
            );
        }
    }
    assert_eq!((p, a), (t.prompts, t.invocations));
    for i in 0..t.malformed_lines {
        lines[i * 7].push("{not json".to_owned());
    }
    lines[1].push(String::new());
    fs::create_dir_all(dir).unwrap();
    for (s, session) in lines.iter_mut().enumerate() {
        session.shuffle(&mut rng);
        fs::write(dir.join(format!("session-{s:03}.jsonl")), session.join("\n") + "\n").unwrap();
    }
}
