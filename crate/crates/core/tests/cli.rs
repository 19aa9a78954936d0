// SPDX-License-Identifier: Apache-2.0

mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn quilopt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quilopt")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = quilopt(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn metrics_match_expected_files() {
    for name in common::FIXTURES {
        let quil = common::fixture_path(&format!("{name}.quil"));
        let expected = fs::read_to_string(common::fixture_path(&format!("{name}.metrics.json"))).unwrap();
        assert_eq!(ok(&["metrics", path(&quil)]), expected, "{name}");
    }
}

#[test]
fn metrics_keys_are_ordered() {
    let quil = common::fixture_path("rus.quil");
    let text = ok(&["metrics", path(&quil)]);
    let keys: Vec<usize> = ["\"per_ddg\"", "\"total_wall_time\"", "\"instr_count\": 40", "\"qin\": 34", "\"qct\""]
        .iter()
        .map(|k| text.find(k).unwrap_or_else(|| panic!("{k} missing")))
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]), "{text}");
}

#[test]
fn optimize_prints_a_parseable_program() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("p.quil");
    fs::write(&src, "DECLARE ro BIT\nDECLARE a INTEGER\nDECLARE b INTEGER\nMOVE a 5\nMOVE b 7\nADD a b\nH 0\nMEASURE 0 ro\n").unwrap();
    let out = quilopt(&["optimize", path(&src), "--passes", "const-prop-fold,liveness-dce"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "DECLARE ro BIT\nH 0\nMEASURE 0 ro\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("folded `ADD a b` to `MOVE a 12`"));

    let saved = dir.path().join("out.quil");
    ok(&["optimize", path(&src), "--passes", "liveness-dce", "-o", path(&saved)]);
    assert!(fs::read_to_string(&saved).unwrap().contains("MEASURE 0 ro"));
}

#[test]
fn readout_option_changes_liveness() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("p.quil");
    fs::write(&src, "DECLARE ro BIT\nDECLARE a INTEGER\nMOVE a 3\nMEASURE 0 ro\n").unwrap();
    let kept = ok(&["optimize", path(&src), "--passes", "liveness-dce", "--readout", "ro,a"]);
    assert!(kept.contains("MOVE a 3"));
    let dropped = ok(&["optimize", path(&src), "--passes", "liveness-dce"]);
    assert!(!dropped.contains("MOVE a 3"));
}

#[test]
fn unknown_pass_is_rejected() {
    let quil = common::fixture_path("rus.quil");
    let out = quilopt(&["optimize", path(&quil), "--passes", "loop-unroll"]);
    assert!(!out.status.success());
}

#[test]
fn graph_writes_one_file_per_ddg() {
    let dir = tempfile::tempdir().unwrap();
    let quil = common::fixture_path("teleportation.quil");
    let listed = ok(&["graph", path(&quil), "--ddg", "--dot", path(dir.path())]);
    let mut names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "teleportation-halt1.dot",
            "teleportation-halt2.dot",
            "teleportation-interior1.dot",
            "teleportation-interior2.dot",
            "teleportation-start.dot"
        ]
    );
    assert_eq!(listed.lines().count(), 5);
    let start = fs::read_to_string(dir.path().join("teleportation-start.dot")).unwrap();
    assert!(start.starts_with("digraph"));

    ok(&["graph", path(&quil), "--cfg", "--dot", path(dir.path())]);
    assert!(dir.path().join("teleportation-cfg.dot").exists());
    assert!(!quilopt(&["graph", path(&quil), "--dot", path(dir.path())]).status.success());
}

#[test]
fn oracle_reports_a_distribution() {
    let quil = common::fixture_path("teleportation.quil");
    let json: serde_json::Value = serde_json::from_str(&ok(&["oracle", path(&quil)])).unwrap();
    let probs = json["probabilities"].as_object().unwrap();
    let total: f64 = probs.values().map(|v| v.as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-9);
    assert!(!quilopt(&["oracle", path(&quil), "--max-steps", "0"]).status.success());
}

#[test]
fn experiment_json_feeds_compare() {
    let dir = tempfile::tempdir().unwrap();
    let quil = common::fixture_path("ipe.quil");
    let before = dir.path().join("before.json");
    let after = dir.path().join("after.json");
    fs::write(&before, ok(&["metrics", path(&quil)])).unwrap();
    let table = ok(&[
        "experiment",
        path(&quil),
        "--runs",
        "20",
        "--pairs",
        "25",
        "--seed",
        "3",
        "--json",
        path(&after),
    ]);
    assert!(table.starts_with("initial:"));
    let deltas: serde_json::Value = serde_json::from_str(&ok(&["compare", path(&before), path(&after)])).unwrap();
    let wall = deltas.as_array().unwrap().iter().find(|d| d["metric"] == "total_wall_time").unwrap();
    assert_eq!(wall["before"], 45.0);
    assert!(wall["after"].as_f64().unwrap() < 45.0);
}

#[test]
fn dump_facts_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let facts = dir.path().join("facts.json");
    let quil = common::fixture_path("rus.quil");
    ok(&["--dump-facts", path(&facts), "metrics", path(&quil)]);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&facts).unwrap()).unwrap();
    assert!(json.is_object() || json.is_array());
}

#[test]
fn missing_file_fails_cleanly() {
    let out = quilopt(&["metrics", "/nonexistent/x.quil"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: reading"));
}
