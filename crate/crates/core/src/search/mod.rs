//! Backtracking search for long rich words avoiding high powers.
//!
//! The search walks, depth first, the tree of canonical words (starting with
//! 0, each new symbol one more than the largest used so far) that are rich
//! and contain no factor of exponent `>= threshold`. In `Lyndon` mode,
//! branches whose word has a proper suffix smaller than itself are cut.
//!
//! Results are deterministic: single-threaded depth-first order is the
//! reference, and the parallel driver reproduces it exactly, including
//! `nodes_explored` under a node budget.

mod checkpoint;
mod engine;
mod parallel;
pub mod period;
pub mod state;

use std::cmp::Ordering;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{ExactError, Exponent, SurdThreshold};

pub use checkpoint::{Checkpoint, CHECKPOINT_FORMAT, CHECKPOINT_VERSION};
pub use state::{canonical_extension_filter, lyndon_prune, Extension, LyndonTracker, SearchState};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("checkpoint version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("checkpoint does not match the configuration: {0}")]
    IncompatibleCheckpoint(String),
    #[error("corrupt checkpoint: {0}")]
    CorruptCheckpoint(String),
    #[error("checkpoint I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("incremental state diverged from direct recomputation at {word}: {detail}")]
    Inconsistent { word: String, detail: String },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Forbid factors whose exponent is at least this value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Threshold {
    Rational(Exponent),
    Surd(SurdThreshold),
}

impl Threshold {
    /// Ordering of `len/p` against the threshold.
    pub fn cmp_ratio(&self, len: u64, p: u64) -> Ordering {
        match self {
            Threshold::Rational(t) => Exponent::new(len, p).expect("p >= 1").cmp(t),
            Threshold::Surd(s) => s
                .cmp_rational(len as i128, p as i128)
                .expect("search lengths are far from overflow"),
        }
    }

    /// Smallest `L` with `L/p >= threshold`.
    pub fn min_forbidden_length(&self, p: usize) -> usize {
        let p64 = p as u64;
        match self {
            Threshold::Rational(t) => {
                let (a, b) = (t.numerator() as u128, t.denominator() as u128);
                (a * p as u128).div_ceil(b) as usize
            }
            Threshold::Surd(s) => {
                let guess = (s.to_f64() * p as f64).floor().max(3.0) as u64 - 2;
                let mut len = guess.max(1);
                while len > 1 && self.cmp_ratio(len - 1, p64) != Ordering::Less {
                    len -= 1;
                }
                while self.cmp_ratio(len, p64) == Ordering::Less {
                    len += 1;
                }
                len as usize
            }
        }
    }

    pub fn exceeds_one(&self) -> bool {
        self.cmp_ratio(1, 1) == Ordering::Less
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Threshold::Rational(t) => t.to_f64(),
            Threshold::Surd(s) => s.to_f64(),
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Rational(t) => write!(f, "{t}"),
            Threshold::Surd(s) => write!(f, "{s}"),
        }
    }
}

impl FromStr for Threshold {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.contains("sqrt2") {
            s.parse().map(Threshold::Surd)
        } else {
            s.parse().map(Threshold::Rational)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Lyndon,
}

impl FromStr for SearchMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(SearchMode::Exhaustive),
            "lyndon" => Ok(SearchMode::Lyndon),
            other => Err(format!("unknown mode {other:?} (expected exhaustive or lyndon)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub alphabet_size: u8,
    pub threshold: Threshold,
    pub mode: SearchMode,
    #[serde(default)]
    pub max_depth: Option<usize>,
    #[serde(default)]
    pub node_budget: Option<u64>,
    #[serde(default)]
    pub checkpoint_interval: Option<u64>,
    /// Recompute incremental data from scratch at every node of depth <= 30.
    #[serde(default)]
    pub validate: bool,
}

pub const VALIDATION_DEPTH: usize = 30;

impl SearchConfig {
    pub fn new(alphabet_size: u8, threshold: Threshold, mode: SearchMode) -> Self {
        SearchConfig {
            alphabet_size,
            threshold,
            mode,
            max_depth: None,
            node_budget: None,
            checkpoint_interval: None,
            validate: false,
        }
    }

    pub fn exhaustive(alphabet_size: u8, threshold: Threshold) -> Self {
        Self::new(alphabet_size, threshold, SearchMode::Exhaustive)
    }

    pub fn with_node_budget(mut self, budget: u64) -> Self {
        self.node_budget = Some(budget);
        self
    }

    pub fn with_max_depth(mut self, depth: usize) -> Self {
        self.max_depth = Some(depth);
        self
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if !(2..=10).contains(&self.alphabet_size) {
            return Err(SearchError::InvalidConfig(format!(
                "alphabet size {} outside 2..=10",
                self.alphabet_size
            )));
        }
        if !self.threshold.exceeds_one() {
            return Err(SearchError::InvalidConfig(format!("threshold {} must exceed 1", self.threshold)));
        }
        if self.checkpoint_interval == Some(0) {
            return Err(SearchError::InvalidConfig("checkpoint interval must be positive".into()));
        }
        Ok(())
    }

    /// Fields that define the search tree; a checkpoint is only valid for
    /// the same tree.
    fn same_tree(&self, other: &SearchConfig) -> Result<(), String> {
        if self.alphabet_size != other.alphabet_size {
            return Err(format!("alphabet size {} vs {}", self.alphabet_size, other.alphabet_size));
        }
        if self.threshold != other.threshold {
            return Err(format!("threshold {} vs {}", self.threshold, other.threshold));
        }
        if self.mode != other.mode {
            return Err(format!("mode {:?} vs {:?}", self.mode, other.mode));
        }
        if self.max_depth != other.max_depth {
            return Err(format!("max depth {:?} vs {:?}", self.max_depth, other.max_depth));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub longest_length: usize,
    /// First word in depth-first order attaining `longest_length`.
    pub witness: String,
    /// Feasible nonempty words visited.
    pub nodes_explored: u64,
    /// The whole tree was explored: no budget stop and no depth cap reached.
    pub exhausted: bool,
    pub budget_hit: bool,
    pub depth_cap_hit: bool,
    pub wall_time_ms: u64,
}

impl SearchResult {
    /// Equality ignoring wall time.
    pub fn same_outcome(&self, other: &SearchResult) -> bool {
        SearchResult { wall_time_ms: 0, ..self.clone() } == SearchResult { wall_time_ms: 0, ..other.clone() }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; 0 or 1 runs single-threaded.
    pub workers: usize,
    /// Depth at which the tree is split into independent subtrees.
    pub split_depth: Option<usize>,
    pub checkpoint_path: Option<PathBuf>,
    pub resume_path: Option<PathBuf>,
}

pub const DEFAULT_SPLIT_DEPTH: usize = 12;

/// Single-threaded search without checkpoints.
pub fn run_search(config: &SearchConfig) -> Result<SearchResult, SearchError> {
    run_search_with(config, &RunOptions::default())
}

pub fn run_search_with(config: &SearchConfig, options: &RunOptions) -> Result<SearchResult, SearchError> {
    config.validate()?;
    let parallel = options.workers > 1;
    if parallel && (options.checkpoint_path.is_some() || options.resume_path.is_some()) {
        return Err(SearchError::InvalidConfig(
            "checkpoint and resume are only supported with a single worker".into(),
        ));
    }
    if parallel {
        let split = options.split_depth.unwrap_or(DEFAULT_SPLIT_DEPTH);
        parallel::run(config, options.workers, split)
    } else {
        let resume = match &options.resume_path {
            Some(path) => Some(Checkpoint::load(path)?),
            None => None,
        };
        engine::run_sequential(config, resume, options.checkpoint_path.as_deref())
    }
}
