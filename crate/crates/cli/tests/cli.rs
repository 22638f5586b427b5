use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smallcancel")).args(args).output().expect("binary runs")
}

fn fixture(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("smallcancel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const ROSE: &str = "vertex 0 2 1 3\nedge 0 1\nedge 2 3\nlabel 0 a\nlabel 2 b\n";

#[test]
fn genus_two_presentation_passes_gates() {
    let p = fixture("genus2.txt", "generators: 4\nabABcdCD\n");
    let o = run(&["--json", "check-presentation", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["lambda_star"], "1/8");
    assert_eq!(v["symmetrized_size"], 16);
}

#[test]
fn torsion_relator_is_a_finding() {
    let p = fixture("torsion.txt", "generators: 2\nabababab\n");
    assert_eq!(run(&["check-presentation", p.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn wicks_and_power() {
    let o = run(&["--json", "wicks", "abAB"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["commutator"], true);
    let v: serde_json::Value = serde_json::from_slice(&run(&["--json", "wicks", "abABcdCD"]).stdout).unwrap();
    assert_eq!(v["commutator"], false);
    let o = run(&["power", "abab"]);
    assert!(stdout(&o).contains("^2"), "{}", stdout(&o));
}

#[test]
fn dehn_reduces_relator_conjugate() {
    let p = fixture("dehn.txt", "generators: 4\nabABcdCD\n");
    let o = run(&["dehn", "--presentation", p.to_str().unwrap(), "cabABcdCDC"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(trivial)"), "{}", stdout(&o));
}

#[test]
fn weight_test_on_rose() {
    let m = fixture("rose.map", ROSE);
    let o = run(&["weight-test", "--map", m.to_str().unwrap(), "--scheme", "1/3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("total = 0 = 2 * 0"), "{}", stdout(&o));
}

#[test]
fn carcrash_on_rose() {
    let m = fixture("rose2.map", ROSE);
    let o = run(&["--json", "carcrash", "--map", m.to_str().unwrap(), "--cars", "2", "--period", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["bound"], 1);
    assert_eq!(v["complete_count"], 2);
}

#[test]
fn free_scan_writes_report() {
    let out = fixture("scan.json", "");
    let o = run(&["scan-free", "--gens", "2", "--maxlen", "6", "--n", "2..3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["counterexamples"].as_array().unwrap().len(), 0);
}

#[test]
fn errors_exit_with_two() {
    assert_eq!(run(&["check-presentation", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(run(&["scan-free", "--gens", "2", "--maxlen", "4", "--n", "3..2"]).status.code(), Some(2));
    let p = fixture("large.txt", "generators: 2\nabAB\n");
    assert_eq!(run(&["dehn", "--presentation", p.to_str().unwrap(), "ab"]).status.code(), Some(2));
}
