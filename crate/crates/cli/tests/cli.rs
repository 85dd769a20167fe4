use std::path::Path;
use std::process::{Command, Output};

use whitney_ext::{FieldGrid, Set64};

fn wext(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wext"))
        .current_dir(dir)
        .env_remove("WHEXT_OUT_DIR")
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn gen_writes_one_atom_per_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = wext(dir.path(), &["gen", "--kind", "cantor", "--depth", "6", "-o", "c.txt"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let set = Set64::load(&dir.path().join("c.txt")).unwrap();
    assert_eq!(set.len(), 64);
}

#[test]
fn constant_jet_extends_to_one_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(wext(p, &["gen", "--kind", "cantor", "--depth", "7", "-o", "c.txt"]).status.success());
    assert!(wext(p, &["measure", "c.txt", "--depth", "7", "-o", "m.txt"]).status.success());
    let args = [
        "extend", "--set", "c.txt", "--measure", "m.txt", "--jet", "const1", "--grid", "-1:2:31", "--derivs", "0,1",
        "-o", "g.txt",
    ];
    let out = wext(p, &args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let grid = FieldGrid::<f64>::parse(&read(p, "g.txt")).unwrap();
    assert_eq!(grid.rows.len(), 31);
    for row in &grid.rows {
        assert!((row[0] - 1.0).abs() <= 1e-12);
        assert!(row[1].abs() <= 1e-9);
    }
}

#[test]
fn outputs_are_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let run = |threads: &str, name: &str| {
        let args = [
            "--threads", threads, "verify", "--suite", "conya,lemashiti,part1", "--depths", "5,6,7", "--points", "20",
            "--partners", "2", "--seed", "3", "-o", name,
        ];
        let out = wext(p, &args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        read(p, name)
    };
    let a = run("1", "a.txt");
    assert_eq!(a, run("1", "b.txt"));
    assert_eq!(a, run("4", "c.txt"));
    assert!(a.contains("# seed = 3"));
}

#[test]
fn out_dir_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_wext"))
        .current_dir(dir.path())
        .env("WHEXT_OUT_DIR", dir.path().join("results"))
        .args(["gen", "--kind", "interval", "--depth", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let written: Vec<_> = std::fs::read_dir(dir.path().join("results")).unwrap().collect();
    assert_eq!(written.len(), 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(wext(p, &["gen", "--kind", "nonsense", "--depth", "2"]).status.code(), Some(2));
    assert_eq!(wext(p, &["measure", "missing.txt", "--depth", "2"]).status.code(), Some(2));
    assert_eq!(wext(p, &["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(wext(p, &["frobnicate"]).status.code(), Some(2));
    // a growth bound no series can meet
    let failing = ["verify", "--suite", "part1", "--depths", "4,5", "--points", "8", "--partners", "1", "--max-growth=-1"];
    assert_eq!(wext(p, &failing).status.code(), Some(1));
}

#[test]
fn holo_identity_is_reproduced() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let args = ["holo", "--depth", "6", "--rings", "3", "--angles", "8", "--radius", "0.5", "-o", "h.txt"];
    let out = wext(p, &args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: Vec<Vec<f64>> = read(p, "h.txt")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
        .collect();
    // rings run from the centre out, so 3 rings give 4 radii
    assert_eq!(rows.len(), 32);
    for r in rows {
        let (re, im) = (r[0] * r[1].cos(), r[0] * r[1].sin());
        assert!((r[2] - re).abs() <= 1e-10 && (r[3] - im).abs() <= 1e-10, "{r:?}");
    }
}
