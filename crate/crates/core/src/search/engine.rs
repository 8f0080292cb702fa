//! Iterative depth-first walker over one subtree of the search tree.

use std::path::Path;

use super::checkpoint::Checkpoint;
use super::state::{Extension, SearchState};
use super::{SearchConfig, SearchError, SearchMode, SearchResult, VALIDATION_DEPTH};
use crate::render_symbols;

/// A new longest word, found as the `at_node`-th node of a walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Improvement {
    pub at_node: u64,
    pub word: Vec<u8>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct WalkLog {
    pub nodes: u64,
    /// Strictly increasing in word length.
    pub improvements: Vec<Improvement>,
    /// Node index at which a word of length `max_depth` was first visited.
    pub depth_cap_at: Option<u64>,
    /// The walk stopped because the node budget ran out.
    pub budget_hit: bool,
}

pub(crate) struct Walker<'c> {
    config: &'c SearchConfig,
    state: SearchState,
    root_depth: usize,
    /// `next[d - root_depth]`: next symbol to try below the node at depth `d`.
    next: Vec<u8>,
    /// Do not descend below this depth (the configured cap or a split depth).
    depth_limit: Option<usize>,
    budget: Option<u64>,
    best_len: usize,
    pub log: WalkLog,
    /// Every visited word, when enumerating the upper part of the tree.
    pub visited: Option<Vec<Vec<u8>>>,
}

impl<'c> Walker<'c> {
    /// Walker over the subtree below `root` (the root itself is not counted).
    pub fn new(config: &'c SearchConfig, root: &[u8]) -> Result<Self, SearchError> {
        let state = SearchState::from_word(config.alphabet_size, config.threshold, root).map_err(|(i, why)| {
            SearchError::CorruptCheckpoint(format!("prefix {} fails at {i}: {why:?}", render_symbols(root)))
        })?;
        Ok(Walker {
            config,
            state,
            root_depth: root.len(),
            next: vec![0],
            depth_limit: config.max_depth,
            budget: config.node_budget,
            best_len: root.len(),
            log: WalkLog::default(),
            visited: None,
        })
    }

    pub fn with_depth_limit(mut self, limit: Option<usize>) -> Self {
        self.depth_limit = limit;
        self
    }

    pub fn with_budget(mut self, budget: Option<u64>) -> Self {
        self.budget = budget;
        self
    }

    fn restore(&mut self, cp: &Checkpoint) -> Result<(), SearchError> {
        if cp.next.len() != cp.path.len() + 1 {
            return Err(SearchError::CorruptCheckpoint("frontier and path lengths disagree".into()));
        }
        if cp.next.iter().any(|&a| a > self.config.alphabet_size) {
            return Err(SearchError::CorruptCheckpoint("frontier symbol outside alphabet".into()));
        }
        let path = crate::parse_symbols(&cp.path).map_err(|e| SearchError::CorruptCheckpoint(e.to_string()))?;
        let witness =
            crate::parse_symbols(&cp.witness).map_err(|e| SearchError::CorruptCheckpoint(e.to_string()))?;
        if witness.len() != cp.longest_length {
            return Err(SearchError::CorruptCheckpoint("witness length differs from longest length".into()));
        }
        self.state = SearchState::from_word(self.config.alphabet_size, self.config.threshold, &path)
            .map_err(|(i, why)| SearchError::CorruptCheckpoint(format!("path fails at {i}: {why:?}")))?;
        self.next = cp.next.clone();
        self.best_len = cp.longest_length;
        self.log = WalkLog {
            nodes: cp.nodes_explored,
            improvements: if witness.is_empty() {
                Vec::new()
            } else {
                vec![Improvement { at_node: cp.nodes_explored, word: witness }]
            },
            depth_cap_at: cp.depth_cap_hit.then_some(0),
            budget_hit: false,
        };
        Ok(())
    }

    fn checkpoint(&self, wall_time_ms: u64) -> Checkpoint {
        let (longest_length, witness) = match self.log.improvements.last() {
            Some(imp) => (imp.word.len(), render_symbols(&imp.word)),
            None => (0, String::new()),
        };
        Checkpoint::new(
            self.config.clone(),
            render_symbols(self.state.word()),
            self.next.clone(),
            self.log.nodes,
            longest_length,
            witness,
            self.log.depth_cap_at.is_some(),
            wall_time_ms,
        )
    }

    /// Runs to completion or until the budget is spent.
    pub fn run(&mut self, mut on_checkpoint: impl FnMut(&Self) -> Result<(), SearchError>) -> Result<(), SearchError> {
        let lyndon = self.config.mode == SearchMode::Lyndon;
        let interval = self.config.checkpoint_interval;
        loop {
            let depth = self.state.len();
            let slot = depth - self.root_depth;
            let can_descend = self.depth_limit.is_none_or(|m| depth < m);
            let candidate = self.next[slot];
            if can_descend && candidate <= self.state.canonical_limit() {
                self.next[slot] += 1;
                if lyndon && self.state.lyndon_prunes(candidate) {
                    continue;
                }
                if self.state.extend_check(candidate) != Extension::Ok {
                    continue;
                }
                if self.budget.is_some_and(|b| self.log.nodes >= b) {
                    self.state.undo();
                    self.next[slot] = candidate;
                    self.log.budget_hit = true;
                    return Ok(());
                }
                self.log.nodes += 1;
                self.next.push(0);
                self.visit()?;
                if interval.is_some_and(|i| self.log.nodes.is_multiple_of(i)) {
                    on_checkpoint(self)?;
                }
                continue;
            }
            if depth == self.root_depth {
                return Ok(());
            }
            self.state.undo();
            self.next.pop();
        }
    }

    fn visit(&mut self) -> Result<(), SearchError> {
        let depth = self.state.len();
        if depth > self.best_len {
            self.best_len = depth;
            self.log.improvements.push(Improvement { at_node: self.log.nodes, word: self.state.word().to_vec() });
        }
        if self.config.max_depth == Some(depth) && self.log.depth_cap_at.is_none() {
            self.log.depth_cap_at = Some(self.log.nodes);
        }
        if let Some(visited) = self.visited.as_mut() {
            visited.push(self.state.word().to_vec());
        }
        if self.config.validate && depth <= VALIDATION_DEPTH {
            self.state.check_consistency().map_err(|detail| SearchError::Inconsistent {
                word: render_symbols(self.state.word()),
                detail,
            })?;
        }
        Ok(())
    }
}

pub(crate) fn result_from_log(log: &WalkLog, wall_time_ms: u64) -> SearchResult {
    let witness = log.improvements.last().map(|i| i.word.as_slice()).unwrap_or(&[]);
    SearchResult {
        longest_length: witness.len(),
        witness: render_symbols(witness),
        nodes_explored: log.nodes,
        exhausted: !log.budget_hit && log.depth_cap_at.is_none(),
        budget_hit: log.budget_hit,
        depth_cap_hit: log.depth_cap_at.is_some(),
        wall_time_ms,
    }
}

pub(crate) fn run_sequential(
    config: &SearchConfig,
    resume: Option<Checkpoint>,
    checkpoint_path: Option<&Path>,
) -> Result<SearchResult, SearchError> {
    let started = std::time::Instant::now();
    let mut walker = Walker::new(config, &[])?;
    let mut prior_ms = 0;
    if let Some(cp) = resume {
        cp.check_compatible(config)?;
        walker.restore(&cp)?;
        prior_ms = cp.wall_time_ms;
    }
    let elapsed = |prior: u64| prior + started.elapsed().as_millis() as u64;
    walker.run(|w| match checkpoint_path {
        Some(path) => w.checkpoint(elapsed(prior_ms)).save(path),
        None => Ok(()),
    })?;
    if let Some(path) = checkpoint_path {
        walker.checkpoint(elapsed(prior_ms)).save(path)?;
    }
    Ok(result_from_log(&walker.log, elapsed(prior_ms)))
}
