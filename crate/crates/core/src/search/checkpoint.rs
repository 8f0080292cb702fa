//! Versioned JSON checkpoints for single-worker searches.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{SearchConfig, SearchError};

pub const CHECKPOINT_FORMAT: &str = "rich-words-search-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub config: SearchConfig,
    /// Current depth-first path.
    pub path: String,
    /// Next symbol to try at each depth `0..=path.len()`.
    pub next: Vec<u8>,
    pub nodes_explored: u64,
    pub longest_length: usize,
    pub witness: String,
    pub depth_cap_hit: bool,
    pub wall_time_ms: u64,
}

impl Checkpoint {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        config: SearchConfig,
        path: String,
        next: Vec<u8>,
        nodes_explored: u64,
        longest_length: usize,
        witness: String,
        depth_cap_hit: bool,
        wall_time_ms: u64,
    ) -> Self {
        Checkpoint {
            format: CHECKPOINT_FORMAT.to_string(),
            version: CHECKPOINT_VERSION,
            config,
            path,
            next,
            nodes_explored,
            longest_length,
            witness,
            depth_cap_hit,
            wall_time_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("checkpoint serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SearchError> {
        let raw: serde_json::Value =
            serde_json::from_str(text).map_err(|e| SearchError::CorruptCheckpoint(e.to_string()))?;
        if raw.get("format").and_then(|f| f.as_str()) != Some(CHECKPOINT_FORMAT) {
            return Err(SearchError::CorruptCheckpoint("not a search checkpoint".into()));
        }
        let version = raw
            .get("version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| SearchError::CorruptCheckpoint("missing version".into()))?;
        if version != CHECKPOINT_VERSION as u64 {
            return Err(SearchError::VersionMismatch { found: version as u32, expected: CHECKPOINT_VERSION });
        }
        serde_json::from_value(raw).map_err(|e| SearchError::CorruptCheckpoint(e.to_string()))
    }

    /// Writes atomically through a temporary file in the same directory.
    pub fn save(&self, path: &Path) -> Result<(), SearchError> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, self.to_json())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, SearchError> {
        Checkpoint::from_json(&fs::read_to_string(path)?)
    }

    pub fn check_compatible(&self, config: &SearchConfig) -> Result<(), SearchError> {
        self.config.same_tree(config).map_err(SearchError::IncompatibleCheckpoint)
    }
}
