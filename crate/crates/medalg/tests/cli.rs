use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use medalg::report::{without_timing, TheoremReport};

fn medalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_medalg")).args(args).env("MEDALG_THREADS", "2").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn demo_prints_the_cube_sets() {
    let o = medalg(&["demo", "cube3-shadows"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("shadow of y from x: {(1,1,0), (1,1,1)}"), "{text}");
    assert!(text.contains("branch of y from z: {(0,0,0), (0,0,1), (1,0,0), (1,0,1)}"), "{text}");
    for name in medalg::examples::DEMOS {
        assert_eq!(medalg(&["demo", name]).status.code(), Some(0), "{name}");
    }
}

#[test]
fn roller_reports_line_ends() {
    let o = medalg(&["roller", "--symbolic", "zline"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "boundary: {-inf, +inf} (2 ends)\n");
    assert_eq!(medalg(&["roller", "--symbolic", "zline^2"]).status.code(), Some(0));
    assert_eq!(medalg(&["roller", "--symbolic", "starlet:4"]).status.code(), Some(0));
}

#[test]
fn usage_and_input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"kind":"graph","n":3,"edges":[[0,1],[1,2],[2,0]]}"#).unwrap();
    let garbage = dir.path().join("garbage.json");
    fs::write(&garbage, "not json").unwrap();
    let missing = dir.path().join("missing.json");
    for args in [
        vec!["--no-such-flag"],
        vec!["demo", "nope"],
        vec!["roller", "--symbolic", "torus"],
        vec!["analyze", path(&bad)],
        vec!["analyze", path(&garbage)],
        vec!["analyze", path(&missing)],
        vec!["verify", "--small", "--checks", "no-such-check"],
    ] {
        let o = medalg(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(!err.contains("panicked"), "{args:?}: {err}");
    }
    let o = medalg(&["analyze", path(&bad)]);
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);
}

#[test]
fn gen_analyze_gen_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let report = dir.path().join("report.json");
    let second = dir.path().join("second.json");
    for id in ["cube5-closure-003", "tree-002", "product-001"] {
        let o = medalg(&["gen", "--seed", "9", "--id", id, "--out", path(&first)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let o = medalg(&["analyze", path(&first), "--format", "json"]);
        assert_eq!(o.status.code(), Some(0));
        fs::write(&report, &o.stdout).unwrap();
        let o = medalg(&["gen", "--from-report", path(&report), "--out", path(&second)]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap(), "{id}");
    }
}

#[test]
fn analyze_and_embed_a_cube() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cube.json");
    let points: Vec<String> = (0..8).map(|i| format!("[{},{},{}]", i >> 2 & 1, i >> 1 & 1, i & 1)).collect();
    fs::write(&file, format!(r#"{{"kind":"coords","factors":[2,2,2],"points":[{}]}}"#, points.join(","))).unwrap();
    let text = stdout(&medalg(&["analyze", path(&file)]));
    for line in [
        "elements: 8",
        "rank: 3",
        "walls: 3",
        "adjacent pairs: 12",
        "chain intervals: 12",
        "consistent orientations: 8",
    ] {
        assert!(text.contains(line), "{line} missing from {text}");
    }
    let o = medalg(&["embed-interval", path(&file), "0,0,0", "1,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("8 elements, 3 chains"), "{text}");
    assert_eq!(medalg(&["embed-interval", path(&file), "0", "9"]).status.code(), Some(2));
}

#[test]
fn verify_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let o = medalg(&["verify", "--small", "--seed", "3", "--out", path(out)]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let load = |p: &Path| -> Vec<TheoremReport> { serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap() };
    assert_eq!(without_timing(&load(&a)), without_timing(&load(&b)));
}
