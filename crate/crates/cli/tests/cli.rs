use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varietyjump")).current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_round_trips_through_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["gen", "cylinder", "6", "--profile", "3,2,2", "-o", "inst.game"]);
    assert!(o.status.success(), "{o:?}");
    let first = std::fs::read_to_string(dir.path().join("inst.game")).unwrap();
    let loaded = varietyjump::io::parse_instance(&first).unwrap();
    assert_eq!(loaded.instance.node_count(), 12);
    assert_eq!(loaded.instance.profile().counts(), &[3, 2, 2]);
    let again = run(dir.path(), &["gen", "cylinder", "6", "--profile", "3,2,2"]);
    assert_eq!(stdout(&again), first);
}

#[test]
fn irc_search_reports_acyclic_or_a_trace() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["irc-search", "--family", "cylinder", "--params", "6", "--profile", "3,2,2"]);
    assert_eq!(stdout(&o).trim(), "ACYCLIC");
    let o = run(dir.path(), &["irc-search", "--family", "cylinder", "--params", "6", "--profile", "3,3,3"]);
    let text = stdout(&o);
    assert!(text.starts_with("IRC of 6 jumps"), "{text}");
    let trace = varietyjump::io::parse_trace(text.lines().skip(2).collect::<Vec<_>>().join("\n").as_str()).unwrap();
    assert_eq!(trace.len(), 6);
}

#[test]
fn construct_then_check() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "torus", "9", "9", "--profile", "10,12,20", "-o", "t.game"]);
    let o = run(dir.path(), &["construct", "t.game", "--explain", "-o", "a.toml"]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("case: 2a"));
    let o = run(dir.path(), &["check", "t.game", "--assignment", "a.toml"]);
    assert!(stdout(&o).contains("EQUILIBRIUM"));
    assert!(!stdout(&o).contains("NOT"));
    let o = run(dir.path(), &["export-dot", "t.game", "--assignment", "a.toml"]);
    assert!(stdout(&o).contains("style=dashed"));
}

#[test]
fn paper_small_bounds_hold() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["bounds", "--sweep", "paper-small", "--jobs", "2"]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).ends_with("0 failed bound(s)\n"));
}

#[test]
fn analyze_prints_exact_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["analyze", "--family", "clique-lines", "--params", "3,2,1", "--profile", "3,2,1"]);
    assert!(stdout(&o).contains("PoA: 3\n"), "{}", stdout(&o));
    let o = run(dir.path(), &["analyze", "--family", "cycle", "--params", "9", "--profile", "4,4", "--objective", "ce", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["poa"], "7/4");
}

#[test]
fn experiment_writes_a_table() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("exp.toml"),
        "[[group]]\ngraph = \"regular\"\ndegree = 3\nnodes = 8\ntypes = 2\nempties = [1]\nseeds = [0, 1]\n",
    )
    .unwrap();
    let o = run(dir.path(), &["experiment", "exp.toml", "-o", "table.txt"]);
    assert!(o.status.success(), "{o:?}");
    let table = std::fs::read_to_string(dir.path().join("table.txt")).unwrap();
    assert_eq!(table.lines().filter(|l| l.starts_with("regular")).count(), 2);
}

#[test]
fn exit_codes_are_distinct() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.game"), "[graph]\nnode_count = 3\nedges = [[0, 9]]\n[profile]\ncounts = [1, 1]\n")
        .unwrap();
    let code = |args: &[&str]| run(dir.path(), args).status.code().unwrap();
    assert_eq!(code(&["irc-search", "bad.game"]), 2);
    assert_eq!(code(&["irc-search", "missing.game"]), 2);
    assert_eq!(code(&["gen", "nope", "1", "--profile", "1,1"]), 2);
    assert_eq!(code(&["analyze", "--family", "torus", "--params", "9,9", "--profile", "30,30"]), 3);
    assert_eq!(code(&["construct", "--family", "clique", "--params", "5", "--profile", "2,1"]), 5);
    assert_eq!(code(&["construct", "--family", "torus", "--params", "8,8", "--profile", "10,10,10"]), 5);
}
