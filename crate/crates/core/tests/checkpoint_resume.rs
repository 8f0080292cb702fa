use std::fs;
use std::path::{Path, PathBuf};

use rich_words::search::{
    run_search, run_search_with, Checkpoint, RunOptions, SearchConfig, SearchError, SearchMode, Threshold,
};

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("checkpoint_resume");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    let _ = fs::remove_file(&path);
    path
}

fn rt3() -> SearchConfig {
    SearchConfig::exhaustive(3, "9/4".parse::<Threshold>().unwrap())
}

fn checkpointed(path: &Path) -> RunOptions {
    RunOptions { checkpoint_path: Some(path.to_path_buf()), ..Default::default() }
}

#[test]
fn interrupt_and_resume_matches_uninterrupted_run() {
    let full = run_search(&rt3()).unwrap();
    for stop in [1u64, 1000, 123_457, 600_000] {
        let path = tmp(&format!("rt3-{stop}.json"));
        let interrupted = rt3().with_node_budget(stop);
        let partial = run_search_with(&interrupted, &checkpointed(&path)).unwrap();
        assert!(partial.budget_hit && !partial.exhausted);
        assert_eq!(partial.nodes_explored, stop);

        let resumed = run_search_with(&rt3(), &RunOptions { resume_path: Some(path), ..Default::default() }).unwrap();
        assert!(resumed.same_outcome(&full), "stop {stop}: {resumed:?} vs {full:?}");
    }
}

#[test]
fn resume_in_several_legs() {
    let mut config = rt3();
    config.mode = SearchMode::Lyndon;
    let full = run_search(&config).unwrap();
    let path = tmp("legs.json");
    let mut budget = 5000;
    let first = config.clone().with_node_budget(budget);
    run_search_with(&first, &checkpointed(&path)).unwrap();
    loop {
        budget += 20_000;
        let leg = config.clone().with_node_budget(budget);
        let options = RunOptions { checkpoint_path: Some(path.to_path_buf()), resume_path: Some(path.clone()), ..Default::default() };
        let r = run_search_with(&leg, &options).unwrap();
        if !r.budget_hit {
            assert!(r.same_outcome(&full));
            break;
        }
    }
}

#[test]
fn periodic_checkpoints_are_resumable() {
    let path = tmp("periodic.json");
    let mut config = rt3().with_node_budget(50_000);
    config.checkpoint_interval = Some(7_000);
    run_search_with(&config, &checkpointed(&path)).unwrap();
    let cp = Checkpoint::load(&path).unwrap();
    assert_eq!(cp.nodes_explored, 50_000);
    let resumed = run_search_with(&rt3(), &RunOptions { resume_path: Some(path), ..Default::default() }).unwrap();
    assert!(resumed.same_outcome(&run_search(&rt3()).unwrap()));
}

#[test]
fn depth_zero_checkpoint_is_a_fresh_start() {
    let path = tmp("empty.json");
    let config = rt3().with_node_budget(0);
    let r = run_search_with(&config, &checkpointed(&path)).unwrap();
    assert_eq!(r.nodes_explored, 0);
    let cp = Checkpoint::load(&path).unwrap();
    assert!(cp.path.is_empty());
    let resumed = run_search_with(&rt3(), &RunOptions { resume_path: Some(path), ..Default::default() }).unwrap();
    assert!(resumed.same_outcome(&run_search(&rt3()).unwrap()));
}

#[test]
fn wrong_alphabet_is_rejected() {
    let path = tmp("k3.json");
    let config = rt3().with_node_budget(100);
    run_search_with(&config, &checkpointed(&path)).unwrap();
    let k4 = SearchConfig::exhaustive(4, "9/4".parse::<Threshold>().unwrap());
    let err = run_search_with(&k4, &RunOptions { resume_path: Some(path.clone()), ..Default::default() }).unwrap_err();
    assert!(matches!(err, SearchError::IncompatibleCheckpoint(_)), "{err}");
    let other_t = SearchConfig::exhaustive(3, "7/3".parse::<Threshold>().unwrap());
    let err = run_search_with(&other_t, &RunOptions { resume_path: Some(path), ..Default::default() }).unwrap_err();
    assert!(matches!(err, SearchError::IncompatibleCheckpoint(_)));
}

#[test]
fn corrupt_and_foreign_files_are_rejected() {
    let path = tmp("good.json");
    let config = rt3().with_node_budget(100);
    run_search_with(&config, &checkpointed(&path)).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let resume = |p: &PathBuf| run_search_with(&rt3(), &RunOptions { resume_path: Some(p.clone()), ..Default::default() });

    let truncated = tmp("truncated.json");
    fs::write(&truncated, &text[..text.len() / 2]).unwrap();
    assert!(matches!(resume(&truncated).unwrap_err(), SearchError::CorruptCheckpoint(_)));

    let versioned = tmp("version.json");
    fs::write(&versioned, text.replace("\"version\": 1", "\"version\": 99")).unwrap();
    assert!(matches!(resume(&versioned).unwrap_err(), SearchError::VersionMismatch { found: 99, expected: 1 }));

    let foreign = tmp("foreign.json");
    fs::write(&foreign, "{\"hello\": 1}").unwrap();
    assert!(matches!(resume(&foreign).unwrap_err(), SearchError::CorruptCheckpoint(_)));

    // A path that is not a feasible word.
    let mut cp = Checkpoint::from_json(&text).unwrap();
    cp.path = "000".into();
    cp.next = vec![0; 4];
    let infeasible = tmp("infeasible.json");
    fs::write(&infeasible, cp.to_json()).unwrap();
    assert!(matches!(resume(&infeasible).unwrap_err(), SearchError::CorruptCheckpoint(_)));

    assert!(matches!(resume(&tmp("missing.json")).unwrap_err(), SearchError::Io(_)));
}

#[test]
fn checkpointing_needs_a_single_worker() {
    let path = tmp("parallel.json");
    let options = RunOptions { workers: 2, checkpoint_path: Some(path), ..Default::default() };
    assert!(matches!(run_search_with(&rt3(), &options).unwrap_err(), SearchError::InvalidConfig(_)));
}
