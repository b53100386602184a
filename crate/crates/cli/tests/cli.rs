use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn elp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn solve_prints_one_view_per_line() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "pi4.elp", "a | b. c :- K a.");
    let o = elp(&["solve", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[[a],[b]]\n");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "pi5.elp", "a | b. c :- K a. :- not c.");
    assert_eq!(elp(&["solve", &f]).status.code(), Some(1));
    let o = elp(&["solve", &f, "--semantics", "k15"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[[a,c]]\n");
    assert_eq!(elp(&["solve", "/no/such/file.elp"]).status.code(), Some(2));
    let bad = write(&dir, "bad.elp", "a :- .");
    assert_eq!(elp(&["solve", &bad]).status.code(), Some(2));
}

#[test]
fn m_needs_elimination_under_k_only_semantics() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "m.elp", "a | b. c :- M a.");
    let o = elp(&["solve", &f, "--semantics", "g11"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("eliminate M"));
    let o = elp(&["solve", &f, "--semantics", "g11", "--eliminate-m"]);
    assert_eq!(stdout(&o), "[[a,c],[b,c]]\n");
}

#[test]
fn json_output() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "ka.elp", "a :- K a.");
    let o = elp(&["solve", &f, "--json", "--explain-unfounded"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["world_views"], serde_json::json!([[[]], [["a"]]]));
    assert_eq!(
        v["unfounded"][0]["unfounded"]["pairs"][0]["X"],
        serde_json::json!(["a"])
    );
}

#[test]
fn max_atoms_from_environment() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.elp", "a | b. c | d.");
    let o = Command::new(env!("CARGO_BIN_EXE_elp"))
        .args(["solve", &f])
        .env("ELP_MAX_ATOMS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn split_reports_mismatch() {
    let ok = elp(&["split", &fixture("ce1b.elp"), "--split", "U=a,b"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = elp(&[
        "split",
        &fixture("ce1b.elp"),
        "--split",
        "a,b",
        "--semantics",
        "g11",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let out = stdout(&bad);
    assert!(out.contains("B_U:") && out.contains("E_U:") && out.contains("MISMATCH"));
}

#[test]
fn split_rejects_non_splitting_sets() {
    let o = elp(&["split", &fixture("dependence.elp"), "--split", "p,q"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_splits() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.elp", "a | b. c :- K a.");
    let o = elp(&["split", &f, "--enumerate-splits"]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert!(lines.contains(&"{a, b}".to_string()));
    assert!(!lines.contains(&"{a}".to_string()));
}

#[test]
fn conformant_plans() {
    let lamps = fixture("lamps.elp");
    let o = elp(&[
        "conformant",
        &lamps,
        "--goal",
        "light",
        "--actions",
        "toggle(l1)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = elp(&[
        "conformant",
        &lamps,
        "--goal",
        "light",
        "--actions",
        "toggle(l2)",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = elp(&[
        "conformant",
        &lamps,
        "--goal",
        "light",
        "--action-predicate",
        "toggle",
        "--gdt",
    ]);
    assert_eq!(stdout(&o), "[[-plugged(l2),light,plugged(l1),toggle(l1)],[light,plugged(l1),plugged(l2),toggle(l1)]]\n");
    let o = elp(&[
        "conformant",
        &lamps,
        "--goal",
        "light",
        "--actions",
        "toggle(l1)",
        "--semantics",
        "k15",
    ]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn properties_on_a_directory() {
    let dir = TempDir::new().unwrap();
    for name in ["ce2.elp", "ce3.elp"] {
        write(&dir, name, &fs::read_to_string(fixture(name)).unwrap());
    }
    let d = dir.path().to_string_lossy().into_owned();
    let o = elp(&[
        "properties",
        &d,
        "--semantics",
        "g91,k15",
        "--count",
        "20",
        "--json",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["matches_expected"], true);
}
