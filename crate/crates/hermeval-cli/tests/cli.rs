use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn hermeval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermeval"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let p = dir.join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", p.to_str().unwrap()]);
    let o = hermeval(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

fn graph(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn value_lines(o: &Output) -> Vec<String> {
    stdout(o)
        .lines()
        .filter(|l| l.starts_with("conductor") || l.starts_with("coeff"))
        .map(String::from)
        .collect()
}

#[test]
fn indepset_is_hard_with_witness() {
    let dir = TempDir::new().unwrap();
    let m = gen(dir.path(), "i.txt", &["indepset"]);
    let o = hermeval(&["classify", m.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("SHARP_P_HARD BlockRankAtLeast2\n"), "{out}");
    assert!(out.contains("\nindices "));
    assert!(out.contains("\ncitation "));
}

#[test]
fn eulerian_is_polytime() {
    let dir = TempDir::new().unwrap();
    let m = gen(dir.path(), "e.txt", &["eulerian"]);
    let o = hermeval(&["classify", m.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(
        out.starts_with("POLYTIME\nomega 2\ncomponents 1\n"),
        "{out}"
    );
}

#[test]
fn potts_is_hard() {
    let dir = TempDir::new().unwrap();
    let m = gen(dir.path(), "p.txt", &["potts", "2", "1"]);
    let o = hermeval(&["classify", m.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("SHARP_P_HARD"));
}

#[test]
fn eulerian_triangle_is_one() {
    let dir = TempDir::new().unwrap();
    let m = gen(dir.path(), "e.txt", &["eulerian"]);
    let g = graph(
        dir.path(),
        "t.txt",
        "vertices 3\nedge 1 2\nedge 2 3\nedge 3 1\n",
    );
    for mode in ["auto", "fast", "oracle"] {
        let o = hermeval(&[
            "eval",
            m.to_str().unwrap(),
            g.to_str().unwrap(),
            "--mode",
            mode,
        ]);
        assert!(o.status.success());
        assert_eq!(value_lines(&o), ["conductor 1", "coeff 0 1/1"]);
    }
    // a path has odd-degree endpoints
    let p = graph(dir.path(), "p.txt", "vertices 2\nedge 1 2\n");
    let o = hermeval(&["eval", m.to_str().unwrap(), p.to_str().unwrap()]);
    assert_eq!(value_lines(&o), ["conductor 1", "coeff 0 0/1"]);
}

#[test]
fn z3_flows() {
    let dir = TempDir::new().unwrap();
    let m = gen(dir.path(), "f.txt", &["flow", "3", "2"]);
    let cyc = graph(dir.path(), "c.txt", "vertices 2\nedge 1 2\nedge 2 1\n");
    let edge = graph(dir.path(), "e.txt", "vertices 2\nedge 1 2\n");
    for mode in ["fast", "oracle"] {
        let o = hermeval(&[
            "eval",
            m.to_str().unwrap(),
            cyc.to_str().unwrap(),
            "--mode",
            mode,
        ]);
        assert_eq!(value_lines(&o), ["conductor 1", "coeff 0 1/1"]);
        let o = hermeval(&[
            "eval",
            m.to_str().unwrap(),
            edge.to_str().unwrap(),
            "--mode",
            mode,
        ]);
        assert_eq!(value_lines(&o), ["conductor 1", "coeff 0 0/1"]);
    }
}

#[test]
fn fast_mode_refuses_hard_instances() {
    let dir = TempDir::new().unwrap();
    let m = gen(dir.path(), "i.txt", &["indepset"]);
    let g = graph(
        dir.path(),
        "t.txt",
        "vertices 3\nedge 1 2\nedge 2 3\nedge 3 1\n",
    );
    let o = hermeval(&[
        "eval",
        m.to_str().unwrap(),
        g.to_str().unwrap(),
        "--mode",
        "fast",
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("#P-hard"));
    // empty set plus the three singletons
    let o = hermeval(&["eval", m.to_str().unwrap(), g.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("mode oracle\n"));
    assert_eq!(value_lines(&o), ["conductor 1", "coeff 0 4/1"]);
}

#[test]
fn pinned_vertices() {
    let dir = TempDir::new().unwrap();
    let m = gen(dir.path(), "i.txt", &["indepset"]);
    // pinning the middle vertex of a path into the set forces both ends out
    let g = graph(
        dir.path(),
        "p.txt",
        "vertices 3\nedge 1 2\nedge 2 3\npin 2 1\n",
    );
    let o = hermeval(&["eval", m.to_str().unwrap(), g.to_str().unwrap()]);
    assert_eq!(value_lines(&o), ["conductor 1", "coeff 0 1/1"]);
    let bad = graph(dir.path(), "b.txt", "vertices 1\npin 1 3\n");
    let o = hermeval(&["eval", m.to_str().unwrap(), bad.to_str().unwrap()]);
    assert!(!o.status.success());
}

#[test]
fn complex_values_use_the_minimal_conductor() {
    let dir = TempDir::new().unwrap();
    // [[1, i], [-i, 1]] stated over ω = 8
    let m = graph(
        dir.path(),
        "m.txt",
        "omega 8\nsize 2\nA 1 1 1 0\nA 1 2 1 2\nA 2 1 1 6\nA 2 2 1 0\n",
    );
    let g = graph(
        dir.path(),
        "g.txt",
        "vertices 2\nedge 1 2\npin 1 1\npin 2 2\n",
    );
    let o = hermeval(&["eval", m.to_str().unwrap(), g.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        value_lines(&o),
        ["conductor 4", "coeff 0 0/1", "coeff 1 1/1"]
    );
    let free = graph(dir.path(), "f.txt", "vertices 2\nedge 1 2\n");
    let o = hermeval(&[
        "eval",
        m.to_str().unwrap(),
        free.to_str().unwrap(),
        "--mode",
        "oracle",
    ]);
    assert_eq!(value_lines(&o), ["conductor 1", "coeff 0 2/1"]);
}

#[test]
fn malformed_input_fails_with_diagnostic() {
    let dir = TempDir::new().unwrap();
    let m = graph(dir.path(), "m.txt", "omega 2\nsize 2\nA 1 2 1 1\n");
    let o = hermeval(&["classify", m.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(o.stderr.starts_with(b"error: "));
    let o = hermeval(&["classify", dir.path().join("missing").to_str().unwrap()]);
    assert!(!o.status.success());
}

#[test]
fn gen_flow_nonzero_matches_explicit_set() {
    let a = hermeval(&["gen", "flow", "2,2", "nonzero"]);
    let b = hermeval(&["gen", "flow", "2,2", "0,1", "1,0", "1,1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!hermeval(&["gen", "flow", "2,2", "2,0"]).status.success());
}

#[test]
fn selftest_is_seeded() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_hermeval"))
            .args(["selftest", "--max-vertices", "4"])
            .env("HERMEVAL_SEED", seed)
            .output()
            .unwrap()
    };
    let (a, b) = (run("11"), run("11"));
    assert!(a.status.success(), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("seed 11\n"));
    assert!(!run("x").status.success());
}
