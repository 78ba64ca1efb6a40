use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gardner_core::analysis::refine_peak;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn gardner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gardner")).args(args).output().unwrap()
}

fn run_ok(args: &[&str]) -> Output {
    let o = gardner(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    o
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn error_code(o: &Output) -> String {
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    v["error"]["code"].as_str().unwrap().to_string()
}

fn read_csv(path: &Path) -> Vec<(f64, i64, f64)> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,n,u"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect()
}

fn cfg_path(name: &str) -> String {
    configs().join(name).to_str().unwrap().to_string()
}

#[test]
fn evaluate_one_soliton_peak() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    run_ok(&["evaluate", "--config", &cfg_path("one_soliton.json"), "--out", out]);
    let rows: Vec<_> = read_csv(&dir.path().join("trajectory.csv")).into_iter().filter(|r| r.0 == 0.0).collect();
    assert_eq!(rows.len(), 61);
    let i = (1..rows.len() - 1).max_by(|&i, &j| rows[i].2.total_cmp(&rows[j].2)).unwrap();
    let (_, amp) = refine_peak(rows[i - 1].2 - 0.5, rows[i].2 - 0.5, rows[i + 1].2 - 0.5);
    assert!((amp + 0.5 - 3.6409).abs() < 1e-3, "peak {}", amp + 0.5);
    assert!((rows[0].2 - 0.5).abs() < 1e-8);

    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("trajectory.json")).unwrap()).unwrap();
    assert_eq!(side["info"]["family"], "one_soliton");
    assert_eq!(side["info"]["background"][0], 0.5);
    let back: gardner_core::RunConfig = serde_json::from_value(side["config"].clone()).unwrap();
    let orig: gardner_core::RunConfig =
        serde_json::from_str(&std::fs::read_to_string(configs().join("one_soliton.json")).unwrap()).unwrap();
    assert_eq!(back, orig);
}

#[test]
fn single_snapshot_from_empty_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    run_ok(&["evaluate", "--config", &cfg_path("kink.json"), "--out", out, "--times", "1.5:1.5:0"]);
    let rows = read_csv(&dir.path().join("trajectory.csv"));
    assert_eq!(rows.len(), 61);
    assert!(rows.iter().all(|r| r.0 == 1.5));
}

#[test]
fn wrong_regime_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.json",
        r#"{"family":"one_soliton","params":{"a":1.0,"b":1.0,"sigma":1},"eigenvalues":[{"lambda":2.0,"c0":1.0}]}"#,
    );
    let o = gardner(&["evaluate", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_code(&o), "REGIME");
    assert!(!dir.path().join("trajectory.csv").exists());
}

#[test]
fn unknown_field_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", r#"{"family":"background","params":{"a":1.0,"b":-1.0,"sigma":-1},"colour":1}"#);
    let o = gardner(&["evaluate", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_code(&o), "CONFIG");
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let o = gardner(&["evaluate", "--config", &cfg_path("one_soliton.json"), "--out", blocker.join("x").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(error_code(&o), "IO");
}

fn validation(dir: &Path, cfg: &str, extra: &[&str]) -> serde_json::Value {
    let mut args = vec!["validate", "--config", cfg, "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    run_ok(&args);
    serde_json::from_str(&std::fs::read_to_string(dir.join("validation.json")).unwrap()).unwrap()
}

#[test]
fn validate_one_soliton_passes() {
    let dir = tempfile::tempdir().unwrap();
    let v = validation(dir.path(), &cfg_path("one_soliton.json"), &["--times", "-2:2:3"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 6);
}

#[test]
fn validate_with_integration() {
    let dir = tempfile::tempdir().unwrap();
    let v = validation(dir.path(), &cfg_path("head_on.json"), &["--times", "-1:1:5", "--integrate", "--dt", "1e-3"]);
    assert_eq!(v["pass"], true);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"evolution_vs_exact"));
}

#[test]
fn printed_radical_fails_the_residual() {
    let dir = tempfile::tempdir().unwrap();
    let body = std::fs::read_to_string(configs().join("kink.json")).unwrap().replace(
        r#""c1_0": 0.5 }"#,
        r#""c1_0": 0.5, "radical": "printed" }"#,
    );
    let cfg = write_config(dir.path(), "kink.json", &body);
    let v = validation(dir.path(), cfg.to_str().unwrap(), &[]);
    assert_eq!(v["pass"], false);
    assert_eq!(v["checks"][0]["name"], "ode_residual");
    assert_eq!(v["checks"][0]["pass"], false);
    assert!(v["theta_residual"].is_number());
}

#[test]
fn background_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bg.json", r#"{"family":"background","params":{"a":1.0,"b":-1.0,"sigma":-1}}"#);
    let v = validation(dir.path(), cfg.to_str().unwrap(), &["--integrate", "--times", "0:1:3", "--dt", "0.01"]);
    assert_eq!(v["pass"], true);
    for c in v["checks"].as_array().unwrap() {
        assert!(c["value"].as_f64().unwrap() < 1e-12);
    }
}

#[test]
fn evolve_tracks_the_exact_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    run_ok(&["evolve", "--config", &cfg_path("kink.json"), "--out", out, "--times", "0:1:11", "--dt", "1e-3"]);
    let rows = read_csv(&dir.path().join("evolve.csv"));
    assert_eq!(rows.len(), 11 * 61);
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("evolve.json")).unwrap()).unwrap();
    assert!(side["max_deviation_from_exact"].as_f64().unwrap() < 1e-6);
}

#[test]
fn classify_region_map() {
    let dir = tempfile::tempdir().unwrap();
    let body = std::fs::read_to_string(configs().join("head_on.json"))
        .unwrap()
        .replace(r#""params""#, r#""grid": { "a": [-3.0, 3.0, 31], "b": [-3.0, -0.1, 30] }, "params""#);
    let cfg = write_config(dir.path(), "fig2.json", &body);
    let o = run_ok(&["classify", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "head_on");
    let csv = std::fs::read_to_string(dir.path().join("region_map.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("a,b,label"));
    let labels: Vec<&str> = lines.map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(labels.len(), 31 * 30);
    for l in ["overtaking_right", "overtaking_left", "head_on", "excluded"] {
        assert!(labels.contains(&l), "{l} missing");
    }
}

#[test]
fn sweep_is_deterministic_and_matches_classify() {
    let dir = tempfile::tempdir().unwrap();
    let (d1, d2) = (dir.path().join("one"), dir.path().join("two"));
    run_ok(&["sweep", "--config", &cfg_path("sweep.json"), "--out", d1.to_str().unwrap(), "--jobs", "4"]);
    run_ok(&["sweep", "--config", &cfg_path("sweep.json"), "--out", d2.to_str().unwrap(), "--jobs", "1"]);
    let a = std::fs::read(d1.join("sweep.json")).unwrap();
    assert_eq!(a, std::fs::read(d2.join("sweep.json")).unwrap());
    assert_eq!(std::fs::read(d1.join("region_map.csv")).unwrap(), std::fs::read(d2.join("region_map.csv")).unwrap());

    let entries: Vec<serde_json::Value> = serde_json::from_slice(&a).unwrap();
    let p = gardner_core::GardnerParams { a: 1.0, b: -1.0, sigma: -1 };
    let ct = gardner_core::classify_collision(&p, 2.3, 2.5).unwrap();
    let cell = entries.iter().find(|e| e["a"] == 1.0 && e["b"] == -1.0).unwrap();
    assert_eq!(cell["report"]["collision_type"], serde_json::to_value(ct).unwrap());
    assert_eq!(cell["report"]["elastic"], true);
}
