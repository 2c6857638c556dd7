use std::path::Path;
use std::process::{Command, Output};

use accelrad::{run, RunConfig, Value};

fn bin(config: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_accelrad"))
        .arg("--config")
        .arg(config)
        .args(extra)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &tempfile::TempDir, name: &str, json: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, json).unwrap();
    path
}

fn num(v: Option<&Value>) -> f64 {
    match v {
        Some(Value::Num(x)) => *x,
        other => panic!("expected a number, got {other:?}"),
    }
}

fn table(json: &str) -> accelrad::Table {
    run(&RunConfig::from_json(json).unwrap()).unwrap()
}

#[test]
fn thermal_quarter_ratio() {
    let t = table(r#"{"scenario": "thermal", "rates": {"R1": 1.0, "R2": 0.25}}"#);
    assert!((num(t.get(0, "nbar")) - 1.0 / 3.0).abs() < 1e-9);
    assert!((num(t.get(0, "Tc")) - 1.0 / 4f64.ln()).abs() < 1e-9);
    assert!((num(t.get(0, "p0")) - 0.75).abs() < 1e-9);
}

#[test]
fn unruh_compare_columns() {
    let t = table(r#"{"scenario": "unruh-compare", "params": {"w": 20, "f": 2000, "aT": 15}}"#);
    assert!((num(t.get(0, "ratio_cavity")) - 7.9577e-3).abs() < 1e-7);
    assert!((num(t.get(0, "unruh_log10")) + 54.575).abs() < 1e-3);
    assert_eq!(t.get(0, "regime_ok"), Some(&Value::Int(1)));
}

#[test]
fn empty_sweep_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "empty.json",
        r#"{"scenario": "sweep", "params": {"w": 1, "f": 10, "aT": 5},
            "sweep": {"scenario": "amplitudes", "axes": [{"name": "w", "start": 1, "stop": 2, "count": 0}]}}"#,
    );
    let out = bin(&cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty range"));
}

#[test]
fn bad_configs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for (name, json) in [
        ("syntax.json", "{"),
        ("unknown.json", r#"{"scenario": "thermal", "extra": 1}"#),
        (
            "negative.json",
            r#"{"scenario": "amplitudes", "params": {"w": -1, "f": 10, "aT": 5}}"#,
        ),
        ("reed.json", r#"{"scenario": "reed", "params": {"w": 1, "f": 1}}"#),
        (
            "oracle.json",
            r#"{"scenario": "oracle", "params": {"w": 1, "f": 2, "aT": 5}, "numerics": {"oracle_nmax": 9}}"#,
        ),
    ] {
        let out = bin(&write_config(&dir, name, json), &[]);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let out = bin(&dir.path().join("missing.json"), &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gain_regime_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "gain.json",
        r#"{"scenario": "squeezed", "rates": {"R1": 1, "R2": 0.5, "S1": [0.6, 0]}}"#,
    );
    assert_eq!(bin(&cfg, &[]).status.code(), Some(2));
}

#[test]
fn truncation_overflow_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "overflow.json",
        r#"{"scenario": "thermal", "rates": {"R1": 1, "R2": 0.9}, "numerics": {"nmax": 8}}"#,
    );
    assert_eq!(bin(&cfg, &[]).status.code(), Some(3));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "sweep.json",
        r#"{"scenario": "sweep", "params": {"w": 1, "f": 50, "aT": 5},
            "sweep": {"scenario": "amplitudes", "axes": [
                {"name": "w", "start": 0.5, "stop": 4, "count": 4},
                {"name": "aT", "start": 1, "stop": 10, "count": 3, "spacing": "log"}]}}"#,
    );
    let a = bin(&cfg, &["--threads", "3"]);
    let b = bin(&cfg, &["--threads", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 13);
    let jsonl = bin(&cfg, &["--format", "jsonl"]);
    assert_eq!(jsonl.stdout, bin(&cfg, &["--format", "jsonl"]).stdout);
    for line in String::from_utf8(jsonl.stdout).unwrap().lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["ln_ratio"].is_number());
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "t.json",
        r#"{"scenario": "thermal", "rates": {"R1": 2, "R2": 1}}"#,
    );
    let target = dir.path().join("out.csv");
    let out = bin(&cfg, &["--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    assert!(text.starts_with("scenario,w,f,"));
}

#[test]
fn unruh_exponent_is_linear_in_w() {
    let t = table(
        r#"{"scenario": "sweep", "params": {"w": 1},
            "sweep": {"scenario": "unruh-compare", "axes": [{"name": "w", "start": 1, "stop": 300, "count": 40}]}}"#,
    );
    let xs: Vec<f64> = (0..40).map(|k| num(t.get(k, "w"))).collect();
    let ys: Vec<f64> = (0..40).map(|k| num(t.get(k, "unruh_log10"))).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r2 = sxy * sxy / (sxx * syy);
    assert!(r2 > 1.0 - 1e-12, "R² = {r2}");
    let slope = sxy / sxx;
    assert!((slope + 2.0 * std::f64::consts::PI / std::f64::consts::LN_10).abs() < 1e-10);
}

#[test]
fn single_point_sweep_matches_run() {
    let dir = tempfile::tempdir().unwrap();
    let single = write_config(
        &dir,
        "one.json",
        r#"{"scenario": "amplitudes", "params": {"w": 2, "f": 40, "aT": 3}}"#,
    );
    let sweep = write_config(
        &dir,
        "grid.json",
        r#"{"scenario": "sweep", "params": {"w": 1, "f": 40, "aT": 3},
            "sweep": {"scenario": "amplitudes", "axes": [{"name": "w", "start": 2, "stop": 7, "count": 1}]}}"#,
    );
    let a = bin(&single, &[]);
    let b = bin(&sweep, &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn failed_sweep_points_keep_their_row() {
    let t = table(
        r#"{"scenario": "sweep", "params": {"w": 1, "f": 10, "aT": 5},
            "sweep": {"scenario": "amplitudes", "axes": [{"name": "w", "start": -1, "stop": 1, "count": 3}]}}"#,
    );
    assert_eq!(t.rows.len(), 3);
    assert!(matches!(t.get(0, "error"), Some(Value::Text(_))));
    assert_eq!(t.get(0, "R1"), Some(&Value::Empty));
    assert_eq!(num(t.get(0, "w")), -1.0);
    assert_eq!(t.get(2, "error"), Some(&Value::Empty));
}

#[test]
fn si_inputs_are_echoed() {
    let t = table(r#"{"scenario": "unruh-compare", "si": {"alpha": 1e8, "omega": 1e10}}"#);
    assert_eq!(num(t.get(0, "si_alpha")), 1e8);
    assert_eq!(num(t.get(0, "w")), 100.0);
    assert!((num(t.get(0, "unruh_log10")) + 272.87).abs() < 0.01);
    assert_eq!(t.get(0, "ratio_exact"), Some(&Value::Empty));
}
