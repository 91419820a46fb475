use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_crownful"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    assert_eq!(code(&run(&full)), 0);
    path
}

#[test]
fn generate_crown_has_sidecar() {
    let out = run(&["generate", "crown", "3"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("6\n"));
    assert!(text.contains("# principal: 0 1 2"));
}

#[test]
fn seeded_generation_is_reproducible() {
    let a = run(&["generate", "random", "9", "0.3", "--seed", "7", "--json"]);
    let b = run(&["generate", "random", "9", "0.3", "--seed", "7", "--json"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&run(&["generate", "random", "9", "0.3", "--json"])), 3);
}

#[test]
fn solve_exit_codes() {
    let dir = TempDir::new().unwrap();
    let g = generate(dir.path(), "c3.graph", &["crown", "3"]);
    let g = g.to_str().unwrap();
    assert_eq!(code(&run(&["solve", "ids", g, "--k", "2"])), 1);
    assert_eq!(code(&run(&["solve", "ids", g, "--k", "3"])), 0);
    assert_eq!(code(&run(&["solve", "ids", g, "--k", "3", "--oracle"])), 0);
    assert_eq!(code(&run(&["solve", "dob", g, "--k", "6"])), 1);
    assert_eq!(code(&run(&["solve", "is", g, "--k", "3"])), 0);
    assert_eq!(code(&run(&["solve", "is", g, "--k", "4"])), 1);
    assert_eq!(code(&run(&["solve", "nope", g, "--k", "1"])), 3);
    assert_eq!(code(&run(&["solve", "ds", "/nonexistent/g", "--k", "1"])), 4);
}

#[test]
fn malformed_graph_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.graph");
    std::fs::write(&path, "2\n0 0\n").unwrap();
    let out = run(&["solve", "ds", path.to_str().unwrap(), "--k", "1"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8(out.stderr).unwrap().contains("self-loop"));
}

#[test]
fn witness_round_trip_and_tampering() {
    let dir = TempDir::new().unwrap();
    let g = generate(dir.path(), "c4.graph", &["crown", "4"]);
    let w = dir.path().join("w.json");
    let out = run(&["solve", "ds", g.to_str().unwrap(), "--k", "6", "--witness", w.to_str().unwrap(), "--json"]);
    assert_eq!(code(&out), 0);
    let line = String::from_utf8(out.stdout).unwrap();
    let report: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(report["verdict"], "found");
    assert_eq!(report["document"]["verified"], true);
    assert_eq!(code(&run(&["verify", w.to_str().unwrap(), "--graph", g.to_str().unwrap()])), 0);

    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    doc["payload"]["set"].as_array_mut().unwrap().pop();
    let t = dir.path().join("t.json");
    std::fs::write(&t, doc.to_string()).unwrap();
    assert_eq!(code(&run(&["verify", t.to_str().unwrap(), "--graph", g.to_str().unwrap()])), 1);
}

#[test]
fn shallow_minor_document_verifies() {
    let dir = TempDir::new().unwrap();
    let h = generate(dir.path(), "s2.graph", &["crown", "2"]);
    let g = generate(dir.path(), "s3.graph", &["crown", "3"]);
    let w = dir.path().join("m.json");
    let (h, g, w) = (h.to_str().unwrap(), g.to_str().unwrap(), w.to_str().unwrap());
    assert_eq!(code(&run(&["minor", "--mode", "shallow", "--depth", "1", h, g, "--witness", w])), 0);
    assert_eq!(code(&run(&["verify", w, "--graph", g, "--pattern", h])), 0);
    assert_eq!(code(&run(&["verify", w, "--graph", h, "--pattern", h])), 1);
    assert_eq!(code(&run(&["minor", "--mode", "directed", g, h])), 1);
    assert_eq!(code(&run(&["minor", "--mode", "topological", h, g])), 0);
    assert_eq!(code(&run(&["minor", "--mode", "butterfly", h, g])), 0);
}

#[test]
fn scatter_and_dichotomy() {
    let dir = TempDir::new().unwrap();
    let g = generate(dir.path(), "rc.graph", &["reversed-crown", "3"]);
    let g = g.to_str().unwrap();
    let out = run(&["scatter", g, "--d", "1", "--m", "3", "--s-budget", "3", "--json"]);
    assert_eq!(code(&out), 0);
    let out = bin().args(["scatter", g, "--d", "1", "--m", "4"]).env("CROWNFUL_BUDGET", "0").output().unwrap();
    assert_eq!(code(&out), 1);
    assert_eq!(code(&run(&["scatter", g, "--d", "1", "--m", "99"])), 3);
    let out = run(&["dichotomy", g, "--r", "0", "--q", "2", "--p", "2", "--json"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(String::from_utf8(out.stdout).unwrap().trim()).unwrap();
    assert_eq!(report["document"]["verified"], true);
}

#[test]
fn grad_and_selftest() {
    let dir = TempDir::new().unwrap();
    let g = generate(dir.path(), "t.graph", &["acyclic-tournament", "4"]);
    let out = run(&["grad", g.to_str().unwrap(), "--r", "0"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("3/2"));
    let out = run(&["selftest", "--only", "12", "--json"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(String::from_utf8(out.stdout).unwrap().trim()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(code(&run(&["selftest", "--only", "13"])), 3);
    let a = run(&["selftest", "--only", "11", "--seed", "5", "--json"]);
    let b = run(&["selftest", "--only", "11", "--seed", "5", "--json", "--jobs", "2"]);
    let verdict = |o: &Output| {
        let v: serde_json::Value = serde_json::from_str(String::from_utf8(o.stdout.clone()).unwrap().trim()).unwrap();
        (v["passed"].clone(), v["detail"].clone())
    };
    assert_eq!(verdict(&a), verdict(&b));
}
