use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqdendro")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("eqdendro-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn validate_reports_composites() {
    let out = run(&["validate", &data("first_tree.json")]);
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["passed"], true);
    assert_eq!(r["result"]["degree"], 4);
    assert_eq!(r["result"]["trees"][0]["composites"].as_array().unwrap().len(), 6);
}

#[test]
fn horn_complements() {
    let f = data("z2_horn.json");
    let r = report(&run(&["horn", &f, "--edges", "Gb", "--complement"]));
    assert_eq!(r["result"]["missing"], 4);
    let r = report(&run(&["orbital-horn", &f, "--edges", "Gb", "--complement"]));
    assert_eq!(r["result"]["missing"], 8);
}

#[test]
fn certificate_roundtrip_and_tampering() {
    let cert = scratch("cert.json");
    let out = run(&["certify", &data("z2_horn.json"), "--kind", "orbital-horn", "--edges", "Gb", "--out", cert.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(report(&out)["result"]["steps"], 2);
    let out = run(&["replay", cert.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(report(&out)["result"]["cells"], 36);

    let mut file: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    file["steps"].as_array_mut().unwrap().swap(0, 1);
    let bad = scratch("bad.json");
    std::fs::write(&bad, file.to_string()).unwrap();
    let out = run(&["replay", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["passed"], false);
}

#[test]
fn input_errors_exit_two() {
    let out = run(&["validate", "/nonexistent/tree.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let junk = scratch("junk.json");
    std::fs::write(&junk, r#"{"edges": ["r", "a"], "vertices": {"r": ["a", "a"]}}"#).unwrap();
    assert_eq!(run(&["validate", junk.to_str().unwrap()]).status.code(), Some(2));
    let out = run(&["horn", &data("z2_horn.json"), "--edges", "b"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["tensor-max", &data("percolation_s.json"), &data("percolation_t.json")];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report(&a)["result"]["maximal"], 5);
}

#[test]
fn failing_checks_exit_one() {
    let out = run(&["lifting-suite", "--operad", "perturbed", "--truncation", "2,2"]);
    assert!(out.status.success(), "all four agree, so the suite itself passes");
    assert_eq!(report(&out)["result"]["all_true"], false);
    let out = run(&["genuine-check", "--operad", "perturbed", "--truncation", "2,2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reedy_and_indexing() {
    let out = run(&["reedy-check", "omega", "--group", "Z2", "--truncation", "2,2", "--families", "graph"]);
    assert!(out.status.success());
    let out = run(&["indexing-validate", "trivial-graph", "--group", "Z2", "--truncation", "2,3", "--families"]);
    assert!(out.status.success());
}

#[test]
fn dot_and_human_output() {
    let out = run(&["export-dot", "tree", &data("first_tree.json")]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("digraph"));
    let out = run(&["--human", "quotient", &data("quaternion.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("orbits: 4"));
}
