use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../newton-forest/fixtures").join(format!("{name}.ntree"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_newton-forest")).args(args).env_remove("NEWTON_FOREST_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_accepts_fixtures() {
    for name in ["t_a", "t_b_2_3", "t_c_1_2_3", "t_d"] {
        let o = run(&["validate", fixture(name).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        assert!(stdout(&o).contains("minimally complete"));
    }
}

#[test]
fn analyze_t_d_as_json() {
    let o = run(&["analyze", fixture("t_d").to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["global"]["delta_tilde"], -4);
    assert_eq!(v["characteristic"]["(v0, {v0, w})"]["c"], "3/2");
    assert_eq!(v["audit"]["failed"], 0);
}

#[test]
fn reports_are_byte_identical() {
    let f = fixture("t_c_1_1_2");
    let a = run(&["analyze", f.to_str().unwrap(), "--format", "json"]);
    let b = run(&["analyze", f.to_str().unwrap(), "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn invalid_tree_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ntree");
    let text = r#"{"root": "v0",
        "cells": [{"id": "v0", "kind": "vertex"}, {"id": "u", "kind": "vertex"}, {"id": "b", "kind": "arrow", "decoration": 1}],
        "edges": [{"ends": ["v0", "u"], "q": [2, 0]}, {"ends": ["u", "b"], "q": [1, 1]}]}"#;
    std::fs::write(&path, text).unwrap();
    let o = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(run(&["analyze", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["audit"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "/no/such/file.ntree"]).status.code(), Some(2));
    let w_is_not_initial = run(&["combs", fixture("t_d").to_str().unwrap(), "--z", "w"]);
    assert_eq!(w_is_not_initial.status.code(), Some(2));
    let bad_threads = Command::new(env!("CARGO_BIN_EXE_newton-forest"))
        .args(["audit", "--gen", "2"])
        .env("NEWTON_FOREST_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn corpus_audit_is_clean() {
    let o = Command::new(env!("CARGO_BIN_EXE_newton-forest"))
        .args(["audit", "--gen", "1000", "--seed", "7", "--max-cells", "40"])
        .env("NEWTON_FOREST_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 failures"));
}

#[test]
fn combs_and_dot() {
    let f = fixture("t_d");
    let o = run(&["combs", f.to_str().unwrap(), "--z", "v0"]);
    assert!(stdout(&o).contains("z = v0: 1 comb(s)"));
    let dot = stdout(&run(&["dot", f.to_str().unwrap(), "--with-report"]));
    assert!(dot.starts_with("graph newton_tree {"));
    assert!(dot.contains("N=6"));
}

#[test]
fn gen_output_validates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.ntree");
    let o = run(&["gen", "--seed", "11", "--max-cells", "20", "--rational"]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&path, &o.stdout).unwrap();
    assert_eq!(run(&["validate", path.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(run(&["gen", "--seed", "11", "--max-cells", "20", "--rational"]).stdout, o.stdout);
}
