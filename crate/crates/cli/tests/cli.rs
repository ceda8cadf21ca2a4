use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn upath(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_upath"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) {
    std::fs::write(dir.path().join(name), text).unwrap();
}

#[test]
fn generate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = upath(dir.path(), &["generate", "3dm", "--n", "3", "--m", "5", "--seed", "9"]);
    let b = upath(dir.path(), &["generate", "3dm", "--n", "3", "--m", "5", "--seed", "9"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("p 3dm 3 5\n"));
    let c = upath(dir.path(), &["generate", "3dm", "--n", "3", "--m", "5", "--seed", "10"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn gadget_files_have_expected_size() {
    let dir = TempDir::new().unwrap();
    write(&dir, "x.3dm", "p 3dm 2 3\ns 0 0 0\ns 1 1 1\ns 0 1 1\n");
    let o = upath(dir.path(), &["generate", "gadget-steiner", "--from", "x.3dm", "--out", "g"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let graph = std::fs::read_to_string(dir.path().join("g.graph")).unwrap();
    assert!(graph.starts_with(&format!("p graph {} ", 8 * 3 + 3 * 2)));
    let terms = std::fs::read_to_string(dir.path().join("g.terms")).unwrap();
    assert!(terms.lines().any(|l| l == "k 8"));

    // The gadget has diameter 3, so it is outside the diameter-2 solver's class.
    let o = upath(dir.path(), &["solve", "--graph", "g.graph", "--model", "g.model", "--terminals", "g.terms", "--algo", "diam2"]);
    assert_eq!(code(&o), 3);
    let o = upath(dir.path(), &["solve", "--graph", "g.graph", "--model", "g.model", "--terminals", "g.terms", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["algorithm"], "oracle");
    assert_eq!(v["status"], "yes");
}

#[test]
fn subdivision_files() {
    let dir = TempDir::new().unwrap();
    write(&dir, "k4.graph", "p graph 4 6\ne 0 1\ne 0 2\ne 0 3\ne 1 2\ne 1 3\ne 2 3\n");
    let o = upath(dir.path(), &["generate", "subdivision", "--from", "k4.graph", "--out", "s"]);
    assert_eq!(code(&o), 0);
    let read = |f: &str| std::fs::read_to_string(dir.path().join(f)).unwrap();
    assert!(read("s.graph").starts_with("p graph 10 12\n"));
    let e1 = read("s.h1").lines().filter(|l| l.starts_with("e ")).count();
    let e2 = read("s.h2").lines().filter(|l| l.starts_with("e ")).count();
    assert_eq!(e1 + e2, 12);
}

#[test]
fn solve_clique_on_star() {
    let dir = TempDir::new().unwrap();
    write(&dir, "k13.graph", "p graph 4 3\ne 0 1\ne 0 2\ne 0 3\n");
    write(&dir, "k13.model", "p model 4 3\nt 0 1\nt 0 2\nv 0 0 1 2\nv 1 0\nv 2 1\nv 3 2\n");
    write(&dir, "k13.terms", "x 1 2 3\n");
    let o = upath(dir.path(), &["solve", "--graph", "k13.graph", "--model", "k13.model", "--terminals", "k13.terms", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["algorithm", "instance_digest", "n", "terminals", "budget", "status", "objective", "steiner_set", "verified", "trace"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["algorithm"], "diam2");
    assert_eq!(v["objective"], 1);
    assert_eq!(v["steiner_set"], serde_json::json!([0]));
    assert_eq!(v["verified"], true);

    let o = upath(dir.path(), &["solve", "--graph", "k13.graph", "--model", "k13.model", "--terminals", "k13.terms", "--budget", "0", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "no");
    assert_eq!(v["objective"], 1);
}

#[test]
fn verify_small_and_tampered() {
    let dir = TempDir::new().unwrap();
    let o = upath(dir.path(), &["verify", "gadget", "--nmax", "1", "--mmax", "2", "--pairs", "20", "--out", "r.json"]);
    assert_eq!(code(&o), 0);
    let o = upath(dir.path(), &["report", "--from", "r.json", "--csv"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("n,m,3dm,cds,steiner,bound,agree,digest\n"));

    let o = upath(dir.path(), &["verify", "gadget", "--nmax", "1", "--mmax", "2", "--pairs", "20", "--inject-bug"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("instance bdbbbf468eba796d"));
}

#[test]
fn empty_report_is_header_only() {
    let dir = TempDir::new().unwrap();
    let o = upath(dir.path(), &["verify", "subdivision", "--nmax", "5", "--pairs", "5", "--out", "r.json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = upath(dir.path(), &["report", "--from", "r.json", "--csv"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "n,m,3dm,cds,steiner,bound,agree,digest\n");
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&upath(dir.path(), &["report", "--from", "missing.json"])), 2);
    write(&dir, "bad.graph", "p graph 3 1\ne 0 5\n");
    write(&dir, "t.terms", "x 0\n");
    let o = upath(dir.path(), &["solve", "--graph", "bad.graph", "--terminals", "t.terms"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    // Vertex 1 occupies host nodes 0 and 2, which are not adjacent.
    write(&dir, "p.graph", "p graph 2 1\ne 0 1\n");
    write(&dir, "p.model", "p model 2 3\nt 0 1\nt 1 2\nv 0 0 1 2\nv 1 0 2\n");
    let o = upath(dir.path(), &["solve", "--graph", "p.graph", "--model", "p.model", "--terminals", "t.terms"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn oracle_size_cap_exits_3() {
    let dir = TempDir::new().unwrap();
    let o = upath(dir.path(), &["generate", "graph", "--n", "80", "--p", "0.3", "--seed", "1"]);
    std::fs::write(dir.path().join("big.graph"), &o.stdout).unwrap();
    write(&dir, "t.terms", "x 0 79\n");
    let o = upath(dir.path(), &["solve", "--graph", "big.graph", "--terminals", "t.terms", "--algo", "oracle"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}
