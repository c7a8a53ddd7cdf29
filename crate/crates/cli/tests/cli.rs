use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mhz(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mhz"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("MHZ_CONFIG")
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn eval_truncation_hand_sum() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&mhz(
        dir.path(),
        &["eval", "--n", "2", "--method", "trunc", "--N", "1", "--alpha", "t:1", "t:1", "--s", "2,0", "2,0"],
    ));
    assert_eq!(v["value"]["re"], 0.25);
    assert_eq!(v["value"]["im"], 0.0);
    assert_eq!(v["method"], "trunc");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["seed"], 0);
    assert!(v["config_echo"]["policy"].is_object());
}

#[test]
fn negative_coordinates_and_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let v =
        json(&mhz(dir.path(), &["eval", "--n", "2", "--method", "diag", "--alpha", "t:1", "t:1", "--s", "2,0", "2,0"]));
    // (ζ(2)² − ζ(4)) / 2 = π⁴/120
    let expected = std::f64::consts::PI.powi(4) / 120.0;
    assert!((v["value"]["re"].as_f64().unwrap() - expected).abs() < 1e-12);
    let v = json(&mhz(dir.path(), &["eval", "--n", "1", "--method", "afe", "--alpha", "t:1", "--s", "0.5,-30"]));
    assert!(v["value"]["im"].as_f64().is_some());
    assert!(v["error_estimate"].as_f64().unwrap() > 0.0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let malformed = mhz(dir.path(), &["eval", "--n", "1", "--alpha", "t:1", "--s", "2;0"]);
    assert_eq!(malformed.status.code(), Some(2));
    let arity = mhz(dir.path(), &["eval", "--n", "2", "--alpha", "t:1", "--s", "2,0"]);
    assert_eq!(arity.status.code(), Some(2));
    let bad_alpha = mhz(dir.path(), &["eval", "--n", "1", "--alpha", "q:1", "--s", "2,0"]);
    assert_eq!(bad_alpha.status.code(), Some(2));
    // on the real axis the evaluator window is empty
    let evaluator = mhz(dir.path(), &["eval", "--n", "1", "--alpha", "t:1", "--s", "1,0"]);
    assert_eq!(evaluator.status.code(), Some(3));
    assert!(!evaluator.stderr.is_empty());
    let mixed = mhz(dir.path(), &["eval", "--n", "2", "--alpha", "t:1", "t:1", "--s", "0.7,5", "0.7,-5"]);
    assert_eq!(mixed.status.code(), Some(3));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "seed = 17\nxi = 0.25\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_mhz"))
        .args([
            "--out",
            dir.path().to_str().unwrap(),
            "eval",
            "--n",
            "1",
            "--method",
            "trunc",
            "--alpha",
            "t:1",
            "--s",
            "2,0",
        ])
        .env("MHZ_CONFIG", &cfg)
        .output()
        .unwrap();
    let v = json(&o);
    assert_eq!(v["seed"], 17);
    assert_eq!(v["config_echo"]["xi"], 0.25);
    let o = mhz(
        dir.path(),
        &[
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            "4",
            "eval",
            "--n",
            "1",
            "--method",
            "trunc",
            "--alpha",
            "t:1",
            "--s",
            "2,0",
        ],
    );
    assert_eq!(json(&o)["seed"], 4);
    std::fs::write(&cfg, "colour = 1\n").unwrap();
    let o = mhz(dir.path(), &["--config", cfg.to_str().unwrap(), "eval", "--n", "1", "--alpha", "t:1", "--s", "2,0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn decomp_reproduces_the_two_variable_table() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&mhz(dir.path(), &["decomp", "--poly", "s2+s1+s1^2*s2^2", "--C", "10"]));
    assert_eq!(v["slots"], 11);
    let slots = v["tableau"]["slots"].as_array().unwrap();
    let rows: Vec<u64> = slots.iter().map(|s| s["j_m"].as_u64().unwrap()).collect();
    assert_eq!(rows, [2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2]);
    let report = &v["verification"];
    for key in ["reconstruction", "tails_vanish", "prefix_monomials", "box_conditions"] {
        assert_eq!(report[key], true, "{key}");
    }
    assert!(dir.path().join("tableau.json").exists());
    let bad = mhz(dir.path(), &["decomp", "--poly", "s1^", "--C", "10"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn scan_with_infinite_epsilon_and_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "scan",
        "--alpha",
        "t:1",
        "--t-min",
        "10",
        "--t-max",
        "40",
        "--step",
        "0.5",
        "--constant",
        "1,0",
        "--center",
        "0.75,0",
        "--epsilon",
        "inf",
        "--also-epsilon",
        "0.5,1",
    ];
    let v = json(&mhz(dir.path(), &args));
    assert_eq!(v["density"], 1.0);
    assert_eq!(v["evaluated"], 61);
    let d: Vec<f64> = v["densities"].as_array().unwrap().iter().map(|d| d["density"].as_f64().unwrap()).collect();
    assert!(d[0] <= d[1] && d[1] <= 1.0);
    let csv = std::fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    assert!(csv.starts_with("t1,sup_distance,pass\n"));
    assert_eq!(csv.lines().count(), 62);
    let summary: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("scan_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 0);

    json(&mhz(dir.path(), &args));
    assert_eq!(std::fs::read_to_string(dir.path().join("scan.csv")).unwrap(), csv);
}

#[test]
fn scan_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    json(&mhz(
        dir.path(),
        &[
            "scan",
            "--alpha",
            "t:1",
            "--t-min",
            "10",
            "--t-max",
            "12",
            "--step",
            "1",
            "--target",
            "s1",
            "--center",
            "0.75,0",
            "--epsilon",
            "0.5",
        ],
    ));
    let summary: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("scan_summary.json")).unwrap()).unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(&spec, summary["spec"].to_string()).unwrap();
    let v = json(&mhz(dir.path(), &["scan", "--spec", spec.to_str().unwrap()]));
    assert_eq!(v["evaluated"], summary["evaluated"]);
    assert_eq!(v["best"], summary["best"]);
    let missing = mhz(
        dir.path(),
        &["scan", "--alpha", "t:1", "--t-max", "12", "--step", "1", "--center", "0.75,0", "--epsilon", "0.5"],
    );
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn zeros_twist_weyl_meansquare_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&mhz(dir.path(), &["zeros", "--alpha", "t:1", "--rect", "0.4,0.6,10,30", "--grid-im", "201"]));
    assert_eq!(v["count"], 3);
    let first = v["zeros"][0]["location"][0]["im"].as_f64().unwrap();
    assert!((first - 14.134725141734693).abs() < 1e-8);
    let csv = std::fs::read_to_string(dir.path().join("zeros.csv")).unwrap();
    assert!(csv.starts_with("re1,im1,residual,winding,winding_check\n"));

    let v = json(&mhz(dir.path(), &["twist", "--alpha", "r:1/3", "--q", "5", "--n0", "1000", "--n-max", "2000"]));
    assert_eq!(v["unimodular_deviation"], 0.0);
    assert!(v["series"]["difference"].as_f64().unwrap() < 1e-6);
    assert!(dir.path().join("growth.csv").exists());
    let out_of_range = mhz(dir.path(), &["twist", "--alpha", "r:1/3", "--q", "5", "--index", "9", "--n0", "1000"]);
    assert_eq!(out_of_range.status.code(), Some(2));

    let v = json(&mhz(
        dir.path(),
        &["weyl", "--alpha", "t:1.4142135623730951", "--N", "3", "--delta", "0.5", "--T", "1e5", "--samples", "20000"],
    ));
    assert_eq!(v["limit_density"], 0.25);
    assert!((v["measured_density"].as_f64().unwrap() - 0.25).abs() < 0.03);

    let v = json(&mhz(dir.path(), &["meansquare", "--alpha", "t:1", "--T", "200", "--samples", "400"]));
    assert!(v["ratio_to_asymptotic"].as_f64().unwrap() > 0.0);
    let none = mhz(dir.path(), &["meansquare", "--alpha", "t:1", "--T", "200", "--samples", "0"]);
    assert_eq!(none.status.code(), Some(3));
}
