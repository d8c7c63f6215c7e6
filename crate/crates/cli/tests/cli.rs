use std::path::Path;
use std::process::{Command, Output};

use qimage_bench::ExperimentReport;

fn qimage(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qimage")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn builtin_circuits_feed_emit() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = dir.path().join("neqr.json");
    let o = qimage(&["circuit", "--kind", "neqr", "--tile", "0,100,200,255", "--out", path(&circuit)]);
    assert!(o.status.success());

    let listing = dir.path().join("neqr.quil");
    let o = qimage(&["emit", "--circuit", path(&circuit), "--dialect", "quil", "--out", path(&listing)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&listing).unwrap();
    assert!(text.contains("CCNOT"));

    let o = qimage(&["emit", "--circuit", path(&circuit), "--dialect", "qasm"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("OPENQASM"));

    let o = qimage(&["circuit", "--kind", "neqr", "--tile", "1,2,3", "--out", path(&circuit)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn capability_violations_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = dir.path().join("teleport.json");
    assert!(qimage(&["circuit", "--kind", "teleport", "--out", path(&circuit)]).status.success());

    let o = qimage(&["emit", "--circuit", path(&circuit), "--dialect", "qasm", "--profile", "dialect-A"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("dialect-A"));

    // Forced output still carries the violations.
    let o = qimage(&["emit", "--circuit", path(&circuit), "--dialect", "qasm", "--profile", "dialect-A", "--force"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stdout.is_empty());
}

#[test]
fn teleport_report_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    assert!(qimage(&["teleport-test", "--out", path(&a)]).status.success());
    assert!(qimage(&["teleport-test", "--out", path(&b)]).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn roundtrip_is_deterministic_apart_from_timing() {
    let load = |dir: &Path| -> ExperimentReport {
        serde_json::from_str(&std::fs::read_to_string(dir.join("neqr.json")).unwrap()).unwrap()
    };
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for _ in 0..2 {
        let o = qimage(&["roundtrip", "--technique", "neqr", "--gen", "noise", "16x16", "--out", path(dir.path()), "--seed", "5"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        reports.push(load(dir.path()).untimed());
    }
    assert_eq!(reports[0], reports[1]);
    assert!(dir.path().join("input-noise-16.pgm").exists());
}

#[test]
fn bad_invocations_are_errors() {
    let empty = tempfile::tempdir().unwrap();
    assert_eq!(qimage(&["report", "--dir", path(empty.path())]).status.code(), Some(1));
    let o = qimage(&["roundtrip", "--technique", "qbip", "--gen", "gradient", "4x8", "--out", path(empty.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!qimage(&["roundtrip", "--technique", "qbip", "--out", path(empty.path())]).status.success());
}
