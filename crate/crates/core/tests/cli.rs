//! End-to-end runs of the command-line binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unitdisc")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn write_config(dir: &Path, extra: &str) -> String {
    let path = dir.join("cfg.json");
    let body = format!(
        r#"{{"alpha": 0.5, "rho": 1.5, "N": 4, "grid_n": 1024, "trials": 2, "arc_counts": [2, 4], "seed": 7{extra}}}"#
    );
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn sample_factor_norms_chain() {
    let dir = tempfile::tempdir().unwrap();
    let sample = dir.path().join("f.json");
    let s = sample.to_str().unwrap();
    let out = run(&["sample", "--family", "two-zero", "--n", "512", "--out", s]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let split = dir.path().join("split.json");
    let out = run(&["factor", "--input", s, "--out", split.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(&split).unwrap()).unwrap();
    assert!(v.get("inner").is_some() && v.get("outer").is_some());

    let out = run(&["norms", "--input", s, "--alpha", "0.5"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out).is_object());
}

#[test]
fn verify_passes_and_fails_by_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let out = run(&["verify", "--check", "LOCAL", "--config", &cfg]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["name"], "LOCAL");

    let strict = write_config(dir.path(), r#", "constant_cap": 1e-9"#);
    let out = run(&["verify", "--check", "LOCAL", "--config", &strict]);
    assert_eq!(code(&out), 1);
}

#[test]
fn usage_and_input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    assert_eq!(code(&run(&["verify", "--check", "NOPE", "--config", &cfg])), 2);
    let bad = write_config(dir.path(), r#", "unknown_field": 1"#);
    assert_eq!(code(&run(&["verify", "--check", "LOCAL", "--config", &bad])), 2);
    assert_eq!(code(&run(&["verify", "--check", "LOCAL", "--config", "/nonexistent.json"])), 2);
    assert_eq!(code(&run(&["carleson", "--points", "0", "--refinement", "8"])), 2);
    assert_eq!(code(&run(&["no-such-command"])), 2);
}

#[test]
fn sweep_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let mut csvs = Vec::new();
    for k in 0..2 {
        let csv = dir.path().join(format!("sweep{k}.csv"));
        let out = run(&["sweep-theorem2", "--config", &cfg, "--csv", csv.to_str().unwrap()]);
        assert!(matches!(code(&out), 0 | 1), "{}", String::from_utf8_lossy(&out.stderr));
        csvs.push((fs::read(&csv).unwrap(), out.stdout));
    }
    assert_eq!(csvs[0], csvs[1]);
    let text = String::from_utf8(csvs[0].0.clone()).unwrap();
    assert!(text.starts_with("arc_count,trials,max,mean,min\n"));
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn carleson_reports_value() {
    let out = run(&["carleson", "--points", "0,3.141592653589793"]);
    assert_eq!(code(&out), 0);
    let v = json(&out)["value"].as_f64().unwrap();
    assert!((v - 3.663_862_376_708_876).abs() < 1e-6);
}
