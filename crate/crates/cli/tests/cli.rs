use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn richwords(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_richwords")).args(args).env_remove("RICHWORDS_FORMAT").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = richwords(&all);
    (serde_json::from_str(&stdout(&out)).unwrap(), out.status.code().unwrap())
}

#[test]
fn generate_prefix() {
    for method in ["phi-tau", "f-g", "dfao"] {
        let out = richwords(&["generate", "--method", method, "--length", "15"]);
        assert!(out.status.success());
        assert_eq!(stdout(&out).trim(), "001001100100110");
    }
}

#[test]
fn generate_to_file() {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("r100.txt");
    let out = richwords(&["generate", "--length", "100", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap().trim().len(), 100);
    let out = richwords(&["check-rich", "--input", path.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn pell_encode_and_decode() {
    assert_eq!(stdout(&richwords(&["pell", "encode", "11"])).trim(), "201");
    assert_eq!(stdout(&richwords(&["pell", "decode", "110"])).trim(), "7");
    let (v, code) = json(&["pell", "encode", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["output"], "110");
    assert_eq!(v["tool"], "richwords");
    assert_eq!(richwords(&["pell", "decode", "12"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(richwords(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(richwords(&["search", "--alphabet", "2"]).status.code(), Some(2));
    assert_eq!(richwords(&["search", "--alphabet", "2", "--threshold", "x/y"]).status.code(), Some(2));
    assert_eq!(richwords(&["check-rich", "--word", "01a"]).status.code(), Some(2));
    assert_eq!(richwords(&["reproduce", "rt9"]).status.code(), Some(2));
    assert!(richwords(&["--help"]).status.success());
}

#[test]
fn check_rich_exit_codes() {
    let rich = richwords(&["check-rich", "--word", "0010110"]);
    assert_eq!(rich.status.code(), Some(0));
    let (v, code) = json(&["check-rich", "--word", "00101100"]);
    assert_eq!(code, 1);
    assert_eq!(v["payload"]["rich"], false);
    assert_eq!(v["payload"]["first_non_rich_prefix"], 8);
    assert_eq!(v["pass"], false);
}

#[test]
fn stdin_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_richwords"))
        .args(["critical-exponent", "--stdin"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"0010010\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("7/3"));
}

#[test]
fn critical_exponent_text_and_json_agree() {
    let text = stdout(&richwords(&["critical-exponent", "--word", "00010001"]));
    let (v, _) = json(&["critical-exponent", "--word", "00010001"]);
    let pair = &v["payload"]["critical_exponent"];
    let rendered = format!("{}/{}", pair[0], pair[1]);
    assert!(text.starts_with(&rendered), "{text} vs {rendered}");
    assert_eq!(rendered, "3/1");
}

#[test]
fn critical_exponent_max_length() {
    let text = stdout(&richwords(&["critical-exponent", "--word", "0010010000", "--max-length", "7"]));
    assert!(text.starts_with("7/3"));
}

#[test]
fn defect_of_words() {
    assert_eq!(stdout(&richwords(&["defect", "--word", "0010110"])).trim(), "0");
    assert_eq!(stdout(&richwords(&["defect", "--word", "00101100"])).trim(), "1");
    // Under the letter exchange, 01 is a theta-palindrome.
    assert!(richwords(&["defect", "--word", "0110", "--theta", "10"]).status.success());
    assert_eq!(richwords(&["defect", "--word", "0110", "--theta", "11"]).status.code(), Some(2));
}

#[test]
fn palgraph_formats() {
    let dot = stdout(&richwords(&["palgraph", "--word", "0110"]));
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("style=dashed"));
    let out = richwords(&["--format", "json", "palgraph", "--word", "0110"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    // gamma, epsilon, 0, 1, 11, 0110
    assert_eq!(v["nodes"].as_array().unwrap().len(), 6);
}

#[test]
fn verify_morphisms_passes() {
    let out = richwords(&["verify-morphisms", "--max-k", "8"]);
    assert!(out.status.success());
    let (v, code) = json(&["verify-morphisms", "--max-k", "8"]);
    assert_eq!((code, &v["pass"]), (0, &Value::Bool(true)));
}

#[test]
fn analyze_r_csv_and_json() {
    let out = richwords(&["analyze-r", "--length", "300", "--format", "csv"]);
    assert!(out.status.success());
    let csv = stdout(&out);
    assert!(csv.lines().any(|l| l.starts_with("7,110,11,18/7,14,false,2,11,true,true,true")));
    let (v, code) = json(&["analyze-r", "--length", "300"]);
    assert_eq!(code, 0);
    assert!(v["payload"]["high_power_periods"].as_array().unwrap().contains(&Value::from(7)));
}

#[test]
fn search_text_and_json_agree() {
    let args = ["search", "--alphabet", "3", "--threshold", "9/4", "--node-budget", "5000"];
    let text = stdout(&richwords(&args));
    let (v, code) = json(&args);
    assert_eq!(code, 0);
    let p = &v["payload"];
    assert!(text.contains(&format!("longest {}", p["longest_length"])));
    assert!(text.contains(&format!("witness {}", p["witness"].as_str().unwrap())));
    assert!(text.contains(&format!("nodes {}", p["nodes_explored"])));
    assert_eq!(p["nodes_explored"], 5000);
    assert_eq!(p["exhausted"], false);
    assert_eq!(v["config"]["alphabet_size"], 3);
}

#[test]
fn search_workers_and_surd() {
    let base = ["search", "--alphabet", "3", "--threshold", "9/4"];
    let (one, _) = json(&base);
    let mut par = base.to_vec();
    par.extend(["--workers", "3", "--split-depth", "6"]);
    let (many, _) = json(&par);
    assert_eq!(one["payload"]["longest_length"], 114);
    for key in ["longest_length", "witness", "nodes_explored", "exhausted"] {
        assert_eq!(one["payload"][key], many["payload"][key]);
    }
    let (v, code) = json(&["search", "--alphabet", "2", "--surd", "4+1sqrt2/2", "--max-depth", "40"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["depth_cap_hit"], true);
    assert_eq!(v["config"]["threshold"]["kind"], "surd");
}

#[test]
fn search_checkpoint_and_resume() {
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    let cp = dir.join("cli-search.json");
    let _ = std::fs::remove_file(&cp);
    let cp = cp.to_str().unwrap();
    let base = ["search", "--alphabet", "3", "--threshold", "9/4"];
    let mut first = base.to_vec();
    first.extend(["--node-budget", "20000", "--checkpoint", cp]);
    assert!(richwords(&first).status.success());
    let mut second = base.to_vec();
    second.extend(["--resume", cp]);
    let (v, _) = json(&second);
    assert_eq!(v["payload"]["longest_length"], 114);
    assert_eq!(v["payload"]["nodes_explored"], 660_424);
    let mut wrong = vec!["search", "--alphabet", "2", "--threshold", "9/4"];
    wrong.extend(["--resume", cp]);
    assert_eq!(richwords(&wrong).status.code(), Some(2));
}

#[test]
fn reproduce_targets() {
    let out = richwords(&["reproduce", "rt3"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("rt3 PASS"));
    let (v, code) = json(&["reproduce", "richness", "--max-length", "5000"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["prefix_length_checked"], 5000);
    assert_eq!(v["command"], "reproduce richness");
    let (v, _) = json(&["reproduce", "periods", "--max-length", "2000"]);
    let periods: Vec<_> = v["payload"]["periods"].as_array().unwrap().iter().map(|p| p["period"].clone()).collect();
    assert!(periods.contains(&Value::from(7)) && periods.contains(&Value::from(17)));
    // Too small a budget for the k = 4 run to reach depth 1000.
    let out = richwords(&["reproduce", "rt4-smoke", "--node-budget", "1000"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("rt4-smoke FAIL"));
}

#[test]
fn reproduce_payload_is_stable() {
    let run = || {
        let (mut v, _) = json(&["reproduce", "highestpowers", "--max-length", "1000"]);
        v.as_object_mut().unwrap().remove("timestamp");
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn env_selects_format() {
    let out = Command::new(env!("CARGO_BIN_EXE_richwords"))
        .args(["pell", "encode", "11"])
        .env("RICHWORDS_FORMAT", "json")
        .output()
        .unwrap();
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["payload"]["output"], "201");
}
