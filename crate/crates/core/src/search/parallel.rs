//! Static tree splitting with an ordered merge.
//!
//! The tree is enumerated sequentially down to a split depth; each word at
//! that depth roots a subtree explored by a worker. Merging the per-subtree
//! logs in depth-first order reproduces the single-threaded result exactly,
//! including where a node budget would have stopped it: a subtree walked
//! with a larger budget can be cut back to any smaller one, because the
//! first `b` nodes of a depth-first walk do not depend on the budget.

use rayon::prelude::*;

use super::engine::{result_from_log, run_sequential, Improvement, WalkLog, Walker};
use super::{SearchConfig, SearchError, SearchResult};

pub(crate) fn run(config: &SearchConfig, workers: usize, split: usize) -> Result<SearchResult, SearchError> {
    if split == 0 || config.max_depth.is_some_and(|m| m <= split) {
        return run_sequential(config, None, None);
    }
    let started = std::time::Instant::now();
    let budget = config.node_budget;

    let mut upper = Walker::new(config, &[])?.with_depth_limit(Some(split)).with_budget(None);
    upper.visited = Some(Vec::new());
    upper.run(|_| Ok(()))?;
    let visited = upper.visited.take().unwrap_or_default();

    let frontier: Vec<&Vec<u8>> = visited.iter().filter(|w| w.len() == split).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SearchError::InvalidConfig(format!("cannot start worker pool: {e}")))?;
    // Without a budget every subtree is needed. With one, subtrees are walked
    // a batch at a time so that at most `workers` of them overshoot the
    // budget that is actually left.
    let batch = if budget.is_some() { workers.max(1) } else { frontier.len().max(1) };
    let mut logs: Vec<WalkLog> = Vec::new();

    let mut merged = WalkLog::default();
    let mut best_len = 0;
    let mut used = 0;
    for word in &visited {
        if budget.is_some_and(|b| merged.nodes >= b) {
            merged.budget_hit = true;
            break;
        }
        merged.nodes += 1;
        if word.len() > best_len {
            best_len = word.len();
            merged.improvements.push(Improvement { at_node: merged.nodes, word: word.clone() });
        }
        if config.max_depth == Some(word.len()) && merged.depth_cap_at.is_none() {
            merged.depth_cap_at = Some(merged.nodes);
        }
        if word.len() != split {
            continue;
        }
        if used == logs.len() {
            let cap = budget.map(|b| b - merged.nodes);
            let end = (used + batch).min(frontier.len());
            let walked: Vec<WalkLog> = pool.install(|| {
                frontier[used..end]
                    .par_iter()
                    .map(|root| {
                        let mut walker = Walker::new(config, root)?.with_budget(cap);
                        walker.run(|_| Ok(()))?;
                        Ok(walker.log)
                    })
                    .collect::<Result<_, SearchError>>()
            })?;
            logs.extend(walked);
        }
        let log = &logs[used];
        used += 1;
        let remaining = budget.map(|b| b - merged.nodes);
        let stopped = remaining.is_some_and(|r| log.nodes > r || log.budget_hit);
        let taken = if stopped { remaining.unwrap_or(log.nodes) } else { log.nodes };
        for imp in log.improvements.iter().take_while(|imp| imp.at_node <= taken) {
            if imp.word.len() > best_len {
                best_len = imp.word.len();
                merged.improvements.push(Improvement { at_node: merged.nodes + imp.at_node, word: imp.word.clone() });
            }
        }
        if let Some(at) = log.depth_cap_at.filter(|&at| at <= taken) {
            merged.depth_cap_at.get_or_insert(merged.nodes + at);
        }
        merged.nodes += taken;
        if stopped {
            merged.budget_hit = true;
            break;
        }
    }
    Ok(result_from_log(&merged, started.elapsed().as_millis() as u64))
}
