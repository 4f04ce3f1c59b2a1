use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, text).unwrap();
        path
    }
}

fn wrr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wrr")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const HALF: &str = "vertices 2\nedge 1 2 1/2\n";
const TRIANGLE: &str = "vertices 3\nedge 1 2 1\nedge 2 3 1\nedge 1 3 1\n";

#[test]
fn rr_check_two_vertex_half() {
    let ws = Workspace::new();
    let g = ws.file("g.graph", HALF);
    let o = wrr(&["rr-check", g.to_str().unwrap(), "0 0"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("lhs=3/2\n"), "{out}");
    assert!(out.contains("rhs=3/2\n"));
    assert!(out.contains("h0(D)=3/2\n"));
    assert!(out.contains("genus=-1/2\n"));
}

#[test]
fn h0_of_empty_system_is_zero() {
    let ws = Workspace::new();
    let g = ws.file("g.graph", "vertices 2\nedge 1 2 2\n");
    let o = wrr(&["h0", g.to_str().unwrap(), "-1 -1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn flags_and_divisor_files() {
    let ws = Workspace::new();
    let g = ws.file("g.graph", HALF);
    let d = ws.file("d.div", "# D\n0\n0\n");
    let o = wrr(&["h0", "--graph", g.to_str().unwrap(), "--divisor", d.to_str().unwrap()]);
    assert_eq!(stdout(&o), "3/2\n");
    let o = wrr(&["h0", "--decimal", "2", g.to_str().unwrap(), "0 0"]);
    assert_eq!(stdout(&o), "3/2 1.50\n");
}

#[test]
fn jacobian_of_triangle() {
    let ws = Workspace::new();
    let g = ws.file("triangle.graph", TRIANGLE);
    let o = wrr(&["jacobian", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("Z/3\n"));
    let o = wrr(&["jacobian", g.to_str().unwrap(), "--k", "1"]);
    assert!(stdout(&o).contains("order=3\n"));
    let k2 = ws.file("k2.graph", "vertices 2\nedge 1 2 1\n");
    assert!(stdout(&wrr(&["jacobian", k2.to_str().unwrap()])).starts_with("trivial\n"));
}

#[test]
fn rank_reduce_equiv() {
    let ws = Workspace::new();
    let g = ws.file("t.graph", TRIANGLE);
    let g = g.to_str().unwrap();
    assert_eq!(stdout(&wrr(&["rank", g, "1 0 0"])), "0\n");
    assert_eq!(stdout(&wrr(&["rank", g, "3 -4 0"])), "-1\n");
    let o = wrr(&["reduce", g, "0 2 0", "--q", "1"]);
    assert_eq!(stdout(&o), "reduced=1 0 1\nscript=0 1 0\nnonempty=true\n");
    let o = wrr(&["equiv", g, "0 2 0", "1 0 1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("equivalent\n"));
    let o = wrr(&["equiv", g, "0 2 0", "1 1 0"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "not equivalent\n");
}

#[test]
fn oracle_verify_agrees() {
    let ws = Workspace::new();
    let g = ws.file("t.graph", TRIANGLE);
    let o = wrr(&["oracle-verify", g.to_str().unwrap(), "2 0 -1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("agree\n"));
    let h = ws.file("h.graph", HALF);
    let o = wrr(&["oracle-verify", h.to_str().unwrap(), "1/3 -5/4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("closed-form h0="));
}

#[test]
fn scan2v_csv() {
    let o = wrr(&["scan2v", "--p", "1", "--lo", "-1", "--hi", "1", "--step", "1/2", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "a,b,h0,nonempty");
    assert_eq!(lines.len(), 1 + 25);
    assert!(lines.contains(&"0,0,1,true"));
    let o = wrr(&["scan2v", "--p", "2", "--lo", "-1", "--hi", "-1", "--step", "1"]);
    assert_eq!(stdout(&o), "a,b,h0,nonempty\n-1,-1,0,false\n");
}

#[test]
fn fuzz_is_deterministic() {
    let args = ["fuzz", "--seed", "42", "--trials", "24", "--max-n", "4"];
    let a = wrr(&args);
    let b = wrr(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("discrepancies=0\n"));
    let o = wrr(&["fuzz", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rr-identity checked=0 failed=0\n"));
}

#[test]
fn exit_codes_for_bad_usage_and_input() {
    let ws = Workspace::new();
    assert_eq!(wrr(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(wrr(&["h0"]).status.code(), Some(64));
    assert_eq!(wrr(&["--help"]).status.code(), Some(0));
    let g = ws.file("g.graph", HALF);
    let g = g.to_str().unwrap();
    assert_eq!(wrr(&["h0", g]).status.code(), Some(64));
    assert_eq!(wrr(&["h0", g, "1 2 3"]).status.code(), Some(65));
    assert_eq!(wrr(&["h0", g, "1 z"]).status.code(), Some(65));
    assert_eq!(wrr(&["rank", g, "0 0"]).status.code(), Some(65));
    assert_eq!(wrr(&["reduce", g, "0 0", "--q", "9"]).status.code(), Some(65));
    let missing = ws.dir.path().join("missing.graph");
    assert_eq!(wrr(&["info", missing.to_str().unwrap()]).status.code(), Some(65));

    let looped = ws.file("loop.graph", "vertices 2\nedge 1 1 2\n");
    let o = wrr(&["info", looped.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(65));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    let bad = ws.file("bad.graph", "vertices 2\nedge 1 2 0.5\n");
    assert_eq!(wrr(&["info", bad.to_str().unwrap()]).status.code(), Some(65));
}

#[test]
fn info_report() {
    let ws = Workspace::new();
    let g = ws.file("t.graph", TRIANGLE);
    let out = stdout(&wrr(&["info", g.to_str().unwrap()]));
    assert!(out.contains("genus=1\n"));
    assert!(out.contains("canonical=0 0 0\n"));
    assert!(out.contains("spanning_tree_weight=3\n"));
}
