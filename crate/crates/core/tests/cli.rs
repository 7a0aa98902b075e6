use std::fs;
use std::process::{Command, Output};

use ws_carnot::cli::output::to_json;
use ws_carnot::CycleResult;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ws-carnot")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn cycle_matches_golden_files() {
    let out = run(&["cycle", "--v0", "1", "--l1", "1", "--l3", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("cycle_paper_v0_1.json"));

    let out = run(&["cycle", "--v0", "0", "--l1", "1", "--l3", "2", "--format", "csv"]);
    assert_eq!(stdout(&out), golden("cycle_paper_v0_0.csv"));

    let out = run(&["diagram", "--v0", "1", "--l1", "1", "--l3", "3", "--mode", "exact", "--samples", "4"]);
    assert_eq!(stdout(&out), golden("diagram_exact_v0_1.csv"));
}

#[test]
fn json_round_trips_byte_for_byte() {
    let out = run(&["cycle", "--v0", "0.7", "--l1", "1.2", "--l3", "4", "--mode", "exact"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let parsed: CycleResult = serde_json::from_str(&text).unwrap();
    assert_eq!(to_json(&parsed), text);
}

#[test]
fn missing_required_key_exits_2() {
    let out = run(&["cycle", "--l1", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("'l3'"));
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(run(&["cycle", "--l1", "1", "--l3", "2", "--mode", "blend"]).status.code(), Some(2));
    assert_eq!(run(&["cycle", "--l1", "1", "--l3", "2", "--samples", "1"]).status.code(), Some(2));
    assert_eq!(run(&["cycle", "--l1", "1", "--l3", "2", "--format", "svg"]).status.code(), Some(2));
    assert_eq!(run(&["cycle", "--l1", "1", "--l3", "2", "--hbar", "0"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn geometry_errors_exit_3() {
    // Cold isotherm would start before the hot one ends.
    assert_eq!(run(&["cycle", "--l1", "1", "--l3", "1.4"]).status.code(), Some(3));
    // The exact cold isotherm crosses the level degeneracy at this depth.
    let out = run(&["cycle", "--v0", "1", "--l1", "1", "--l3", "2", "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unwritable_output_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.json");
    let out = run(&["cycle", "--l1", "1", "--l3", "2", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("cycle.json");
    let out = run(&["cycle", "--v0", "1", "--l1", "1", "--l3", "2", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(target).unwrap(), golden("cycle_paper_v0_1.json"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("engine.conf");
    fs::write(&path, "# engine\nv0 = 1\nl1 = 1\nl3 = 5   # overridden\nformat = json\n").unwrap();
    let out = run(&["cycle", "--config", path.to_str().unwrap(), "--l3", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("cycle_paper_v0_1.json"));

    fs::write(&path, "l1 = 1\nl3 = 2\ndepth = 4\n").unwrap();
    assert_eq!(run(&["cycle", "--config", path.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("nope.conf");
    assert_eq!(run(&["cycle", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn diagram_formats() {
    let out = run(&["diagram", "--v0", "1", "--l1", "1", "--l3", "3", "--samples", "5", "--format", "svg"]);
    assert!(out.status.success());
    let svg = stdout(&out);
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<polyline").count(), 4);
    for label in ["L1", "L2", "L3", "L4"] {
        assert!(svg.contains(&format!(">{label}</text>")));
    }

    let out = run(&["diagram", "--l1", "1", "--l3", "3", "--samples", "3", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 12);
    assert_eq!(rows[3]["stroke"], "AdiabaticExpansion");
    assert!(rows[3]["w1"].is_null());
}

#[test]
fn sweep_over_cold_width() {
    let out = run(&["sweep", "--l1", "1", "--param", "l3", "--start", "2", "--stop", "3", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("l3,work_total,heat_input,efficiency"));
    let rows: Vec<Vec<f64>> =
        lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let law = 1.0 - 9.0 / (4.0 * row[0] * row[0]);
        assert!((row[3] - law).abs() < 1e-14);
    }
    assert_eq!(rows[1][0], 2.5);
}

#[test]
fn sweep_rejects_bad_grids() {
    let base = ["sweep", "--l1", "1", "--param", "l3", "--start", "2", "--stop", "3"];
    assert_eq!(run(&[&base[..], &["--steps", "1"]].concat()).status.code(), Some(2));
    // Grid reaches into infeasible widths.
    let out = run(&["sweep", "--l1", "1", "--param", "l3", "--start", "1", "--stop", "3", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn sweep_depth_json() {
    let out = run(&["sweep", "--l1", "1", "--l3", "2", "--param", "v0", "--start", "0", "--stop", "1", "--steps", "2", "--format", "json"]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows[0]["efficiency"].as_f64().unwrap(), 0.4375);
    assert!((rows[1]["efficiency"].as_f64().unwrap() - 0.559425319292233).abs() < 1e-15);
}

#[test]
fn check_reports_and_exits_0() {
    for v0 in ["0", "1"] {
        let out = run(&["check", "--v0", v0, "--l1", "1", "--l3", "2"]);
        assert_eq!(out.status.code(), Some(0), "v0 = {v0}");
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report["claims"].as_array().unwrap().len(), 10);
        assert_eq!(report["zero_depth_claims_hold"], true);
    }
    let out = run(&["check", "--v0", "1", "--l1", "1", "--l3", "2"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let published = report["claims"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "published_isotherms_match_exact")
        .unwrap();
    assert_eq!(published["holds"], false);
}
