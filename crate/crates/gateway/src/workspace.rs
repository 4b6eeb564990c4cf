//! Loading a corpus root: config, parsed corpus and the cached index.

use std::fs;
use std::path::{Path, PathBuf};

use ctxforge_core::{parse_corpus, ContextCorpus, ContextIndex, CorpusConfig, CorpusError};

/// Index snapshot persisted next to the config file.
pub const INDEX_CACHE_FILE: &str = ".ctxforge-index.json";

pub struct Workspace {
    pub root: PathBuf,
    pub config: CorpusConfig,
    pub corpus: ContextCorpus,
    pub index: ContextIndex,
}

impl Workspace {
    /// Parses the corpus and reuses the cached index when its fingerprint
    /// still matches; otherwise rebuilds in memory.
    pub fn open(root: &Path) -> Result<Self, CorpusError> {
        let config = CorpusConfig::load(root)?;
        let corpus = parse_corpus(root, &config)?;
        let index = load_cached_index(root)
            .filter(|cached| cached.corpus_fingerprint == corpus.fingerprint)
            .unwrap_or_else(|| ContextIndex::build(&corpus));
        Ok(Self {
            root: root.to_path_buf(),
            config,
            corpus,
            index,
        })
    }

    pub fn cache_path(&self) -> PathBuf {
        self.root.join(INDEX_CACHE_FILE)
    }

    /// Rebuilds the index and writes the snapshot.
    pub fn rebuild_and_persist(&mut self) -> std::io::Result<PathBuf> {
        self.index = ContextIndex::build(&self.corpus);
        let path = self.cache_path();
        let json = serde_json::to_string_pretty(&self.index).map_err(std::io::Error::other)?;
        fs::write(&path, json)?;
        Ok(path)
    }
}

fn load_cached_index(root: &Path) -> Option<ContextIndex> {
    let text = fs::read_to_string(root.join(INDEX_CACHE_FILE)).ok()?;
    serde_json::from_str(&text).ok()
}
