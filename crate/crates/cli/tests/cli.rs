use std::process::{Command, Output};

use serde_json::Value;

fn hgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgame"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn density_of_named_and_file_graphs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k4.txt");
    std::fs::write(&path, "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let a = json(&hgame(&["density", "K4"]));
    let b = json(&hgame(&["density", path.to_str().unwrap()]));
    assert_eq!(a, b);
    assert_eq!(a["m"], "3/2");
    assert_eq!(a["m2"], "5/2");
}

#[test]
fn solve_reads_systems_and_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sys.json");
    std::fs::write(&path, r#"{"board_size": 3, "sets": [[0, 1], [0, 2], [1, 2]]}"#).unwrap();
    let out = json(&hgame(&["solve", path.to_str().unwrap()]));
    assert_eq!(out["winner"], "maker");
    let out = json(&hgame(&["solve", path.to_str().unwrap(), "--first", "breaker"]));
    assert_eq!(out["winner"], "breaker");
    let out = json(&hgame(&["solve", "K4", "--pattern", "K3"]));
    assert_eq!(out["winner"], "breaker");
}

#[test]
fn refusal_exits_with_two() {
    let out = hgame(&["solve", "K12", "--pattern", "K3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hgame(&["threshold", "K3", "--hp"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_input_exits_with_one() {
    assert_eq!(hgame(&["density", "no-such-graph"]).status.code(), Some(1));
    assert_eq!(hgame(&["play", "K4", "K3", "--maker", "es"]).status.code(), Some(1));
}

#[test]
fn play_reports_a_winner() {
    let out = json(&hgame(&["play", "K5-", "K3", "--maker", "k5minus-triangle", "--breaker", "es"]));
    assert_eq!(out["winner"], "maker");
    assert_eq!(out["maker_name"], "k5minus-triangle");
}

#[test]
fn hcore_summary_counts() {
    let out = json(&hgame(&["hcore", "K3", "K3"]));
    assert_eq!(out["core_size"], 0);
    assert_eq!(out["k"], 1);
    assert_eq!(out["removed_open"], 3);
    let out = json(&hgame(&["hcore", "K4", "K3"]));
    assert_eq!(out["core_size"], 6);
    assert_eq!(out["components"], 1);
}

#[test]
fn threshold_exponents() {
    assert_eq!(json(&hgame(&["threshold", "K3"]))["exponent"], "1/2");
    assert_eq!(json(&hgame(&["threshold", "K5-", "--hp"]))["exponent"], "3/8");
}

#[test]
fn certify_writes_csv_and_is_reproducible_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let common = ["certify", "C4", "--n", "40,60", "--c", "0.1,0.5", "--trials", "3", "--audit", "1"];
    for (path, jobs) in [(&a, "1"), (&b, "3")] {
        let mut args = common.to_vec();
        args.extend(["--no-timing", "--format", "csv", "--seed", "9", "--jobs", jobs, "--out", path.to_str().unwrap()]);
        let out = hgame(&args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.records().count(), 4);
}

#[test]
fn sweep_json_has_schema_version() {
    let out = json(&hgame(&[
        "sweep", "K3", "--n", "20", "--p", "0.3", "--trials", "2", "--maker", "greedy", "--breaker", "es",
    ]));
    assert_eq!(out["schema_version"], 1);
    assert_eq!(out["cells"][0]["trials"], 2);
}

#[test]
fn sample_is_seeded() {
    let a = hgame(&["sample", "--n", "30", "--p", "0.2", "--seed", "4", "--format", "csv"]);
    let b = hgame(&["sample", "--n", "30", "--p", "0.2", "--seed", "4", "--format", "csv"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(hgame(&["sample", "--n", "3", "--p", "1.5"]).status.code(), Some(1));
}
