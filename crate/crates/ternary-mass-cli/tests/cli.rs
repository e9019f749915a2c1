//! End-to-end tests of the `ternary-mass` binary: exit codes, cache
//! behavior, determinism, and output formats.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ternary-mass"))
}

fn run(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = bin();
    cmd.args(args);
    if let Some(path) = cache {
        cmd.env("TERNARY_MASS_CACHE", path);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn enumerate_writes_deterministic_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let out = run(&["enumerate", "--max-det", "8"], Some(&cache));
    assert!(out.status.success(), "{out:?}");
    let first = std::fs::read(&cache).unwrap();
    let text = String::from_utf8_lossy(&first).into_owned();
    // Classes exist at det_h 4, 6, 8 and nowhere else below 8.
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains("\"det_h\":4"));
    assert!(text.contains("\"det_h\":6"));
    assert!(text.contains("\"det_h\":8,\"aut\":48"));
    // Rerun is byte-identical; worker count never affects the bytes.
    let out = run(&["enumerate", "--max-det", "8", "--workers", "3"], Some(&cache));
    assert!(out.status.success());
    assert_eq!(std::fs::read(&cache).unwrap(), first);
}

#[test]
fn enumerate_extends_existing_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    assert!(run(&["enumerate", "--max-det", "40"], Some(&cache)).status.success());
    let big = std::fs::read(&cache).unwrap();
    // Re-enumerating a smaller bound keeps the deeper records.
    assert!(run(&["enumerate", "--max-det", "8"], Some(&cache)).status.success());
    assert_eq!(std::fs::read(&cache).unwrap(), big);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let out = run(&["enumerate", "--max-det", "7"], Some(&cache));
    assert_eq!(out.status.code(), Some(2));
    assert!(!cache.exists());
    let out = run(&["series", "--which", "nonsense", "--bound", "4"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["local", "--prime", "2", "--valuation", "3", "--unit", "4"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["local", "--prime", "9", "--valuation", "1", "--unit", "1"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_clean_run_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let out = run(&["verify", "--max-det", "60"], Some(&cache));
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("all determinants <= 60 pass"));
    // JSON report mode.
    let out = run(&["verify", "--max-det", "60", "--json", "--no-build"], Some(&cache));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("{\"S\":8,\"which\":\"total\",\"enumerated\":\"1/48\",\"formula\":\"1/48\",\"pass\":true}"));
}

#[test]
fn verify_missing_cache_with_no_build_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("absent.jsonl");
    let out = run(&["verify", "--max-det", "20", "--no-build"], Some(&cache));
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_flags_injected_fault() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    assert!(run(&["enumerate", "--max-det", "60"], Some(&cache)).status.success());
    // Delete one class record (not the coverage witness at the top).
    let text = std::fs::read_to_string(&cache).unwrap();
    let tampered: Vec<&str> = text
        .lines()
        .filter(|l| !l.contains("\"det_h\":16,\"aut\":12"))
        .collect();
    assert!(tampered.len() < text.lines().count());
    std::fs::write(&cache, tampered.join("\n")).unwrap();
    let out = run(&["verify", "--max-det", "60", "--no-build"], Some(&cache));
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("16"), "offending determinant listed: {err}");
}

#[test]
fn corrupt_cache_exits_3_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    std::fs::write(&cache, "{not json}\n").unwrap();
    let out = run(&["verify", "--max-det", "8", "--no-build"], Some(&cache));
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn series_dumps() {
    let out = run(&["series", "--which", "mass", "--bound", "8"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("8\t1/48"));
    // No odd-index lines in mass dumps.
    assert!(!text.lines().any(|l| l.starts_with("3\t") || l.starts_with("7\t")));
    let out = run(&["series", "--which", "b", "--bound", "2"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("2\t-1"));
    assert!(text.contains("routes-agree=true"));
    let out = run(&["series", "--which", "a", "--bound", "16"], None);
    assert!(stdout(&out).contains("routes-agree=true"));
    let out = run(&["series", "--which", "primitive-mass", "--bound", "64"], None);
    assert!(stdout(&out).contains("64\t"));
}

#[test]
fn mass_query() {
    let out = run(&["mass", "--det", "8"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "1/48");
    let out = run(&["mass", "--det", "16"], None);
    assert_eq!(stdout(&out).trim(), "7/48");
    let out = run(&["mass", "--det", "3"], None);
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn local_dumps() {
    let out = run(&["local", "--prime", "5", "--valuation", "3", "--unit", "-1"], None);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("6 genera"));
    assert!(text.contains("A* = "));
    assert!(text.contains("B* = "));
    let out = run(&["local", "--prime", "2", "--valuation", "3", "--unit", "1"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("decorated genera"));
    assert!(text.contains("A* = 3/8"));
    assert!(text.contains("B* = -5/16"));
}
