use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cnlse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cnlse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn csv_rows(path: &Path) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|x| x.unwrap()).collect()
}

fn num(s: &str) -> f64 {
    if s == "NaN" {
        f64::NAN
    } else {
        s.parse().unwrap()
    }
}

#[test]
fn paper_check_defaults_reproduce_the_target_value() {
    let o = cnlse(&["paper-check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("0.1133082664"));
    assert!(text.contains("match"));
    assert_eq!(
        text.lines()
            .filter(|l| l.trim_start().starts_with(['1', '-']))
            .count(),
        4
    );
}

#[test]
fn paper_check_at_the_origin_gives_minus_two() {
    let o = cnlse(&["paper-check", "--x", "0", "--t", "0"]);
    // Falsification holds but no branch is near 0.113 at this point.
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert_eq!(text.matches("-2.0000000000").count(), 4);
    assert!(text.contains("agrees"));
}

#[test]
fn zero_q_is_rejected_at_parse_time() {
    let o = cnlse(&["paper-check", "--q", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonzero"));
}

#[test]
fn malformed_input_exits_one() {
    for args in [
        &["paper-check", "--grid", "1:2"][..],
        &["paper-check", "--format", "xml"],
        &["frobnicate"],
        &["paper-check", "--tol", "bogus=1"],
        &["paper-check", "--tol", "-1"],
        &["paper-check", "--z0", "-1"],
        &["paper-check", "--config", "/nonexistent/config.json"],
        &["scan"],
        &["evolve", "--branch", "all"],
        &["elliptic", "--u", "abc"],
    ] {
        assert_eq!(cnlse(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn scan_grid_records_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = cnlse(&[
        "scan",
        "--grid",
        "0.2:1.2:10,0.2:1.2:10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 400);
    for branch in [("1", "1"), ("1", "-1"), ("-1", "1"), ("-1", "-1")] {
        assert_eq!(
            rows.iter().filter(|r| (&r[0], &r[1]) == branch).count(),
            100
        );
    }
    assert!(rows.iter().all(|r| num(&r[5]) <= 1e-8));
    // Next to a pole the values are huge and r2 loses digits; those rows are flagged.
    assert!(rows
        .iter()
        .filter(|r| !r[8].contains("near_pole"))
        .all(|r| num(&r[6]) <= 1e-8));
    let max_p = rows.iter().map(|r| num(&r[4]).abs()).fold(0.0, f64::max);
    assert!(max_p >= 0.05);
    // Ordered by (branch, x, t).
    let first: Vec<&str> = rows[..2].iter().map(|r| &r[3]).collect();
    assert_eq!(first, ["2.00000000000e-1", "3.11111111111e-1"]);
    // Points close to a pole of Q are kept and flagged.
    assert!(rows.iter().any(|r| r[8].contains("near_pole")));
}

#[test]
fn empty_scan_grid_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("empty.csv");
    let o = cnlse(&[
        "scan",
        "--grid",
        "0.2:1.2:0,0.2:1.2:10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, format: &str| {
        let path = dir.path().join(name);
        let o = cnlse(&[
            "scan",
            "--grid",
            "0.5:1:3,0.5:1:2",
            "--format",
            format,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(path).unwrap()
    };
    assert_eq!(run("a.csv", "csv"), run("b.csv", "csv"));
    let strip = |bytes: Vec<u8>| {
        let mut v: Value = serde_json::from_slice(&bytes).unwrap();
        v["metadata"]
            .as_object_mut()
            .unwrap()
            .remove("generated_unix");
        v
    };
    let a = strip(run("a.json", "json"));
    assert_eq!(a, strip(run("b.json", "json")));
    let first = &a["records"][0];
    for key in [
        "x", "t", "sigma_z", "sigma_q", "P", "r1", "r2", "pde_abs", "notes",
    ] {
        assert!(first.get(key).is_some(), "{key}");
    }
}

#[test]
fn config_file_sits_between_defaults_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"c3": 0.5, "q0": 1.5, "branch": "pp", "format": "json", "tol": {"r1": 1e-6}}"#,
    )
    .unwrap();
    let o = cnlse(&[
        "residuals",
        "--config",
        cfg.to_str().unwrap(),
        "--c3",
        "0.2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let params = &v["metadata"]["params"];
    assert_eq!(params["c3"], 0.2);
    assert_eq!(params["q0"], 1.5);
    assert_eq!(params["c1"], -2.0);
    assert_eq!(v["metadata"]["tolerances"]["r1"], 1e-6);
    assert_eq!(v["records"].as_array().unwrap().len(), 1);
}

#[test]
fn pde_residual_modulus_equals_p() {
    let o = cnlse(&["pde", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    for r in v["records"].as_array().unwrap() {
        let (abs, p) = (
            r["residual_abs"].as_f64().unwrap(),
            r["P"].as_f64().unwrap(),
        );
        assert!((abs - p.abs()).abs() < 1e-5, "{abs} vs {p}");
    }
}

#[test]
fn evolve_writes_the_deviation_series() {
    let o = cnlse(&["evolve", "--grid", "-0.8:3.2:256,0.1:0.2:2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,l2,linf");
    assert_eq!(lines.len(), 3);
    let o = cnlse(&["evolve", "--grid", "-3:3.2:256,0:0.1:2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pole"));
}

#[test]
fn elliptic_reports_values_and_poles() {
    let o = cnlse(&["elliptic", "--u", "0.3", "--u", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("1.11272591517e1"));
    assert!(text.lines().last().unwrap().ends_with("pole"));
}

#[test]
fn selftest_passes_and_honours_overrides() {
    let o = cnlse(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    let o = cnlse(&["selftest", "--skip", "reference"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("reference"));
    let o = cnlse(&["selftest", "--skip", "reference", "--tol", "1e-20"]);
    assert_eq!(o.status.code(), Some(1));
}
