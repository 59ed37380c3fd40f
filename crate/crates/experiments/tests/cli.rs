use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qzeno(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qzeno")).args(args).output().unwrap()
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn oracle_check_passes() {
    let out = qzeno(&["oracle-check", "--json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["grids"].as_array().unwrap().len(), 5);
}

#[test]
fn mutated_oracle_check_fails() {
    assert_eq!(code(&qzeno(&["oracle-check", "--mutate"])), 2);
}

#[test]
fn run_writes_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("xx_single.json");
    let out = qzeno(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--workers",
        "1",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("custom.csv").exists());
    assert!(dir.path().join("custom.manifest.json").exists());
}

#[test]
fn invalid_config_exits_with_validation_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"base": {"layout": {"topology": "ring", "targets": 1, "d": 3}}}"#,
    )
    .unwrap();
    let out = qzeno(&[
        "run",
        "--config",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("base.layout"));
}

#[test]
fn unknown_preset_and_bad_usage() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&qzeno(&["preset", "fig99", "--out", dir.path().to_str().unwrap()])),
        1
    );
    assert_eq!(code(&qzeno(&["frobnicate"])), 1);
    assert_eq!(code(&qzeno(&["--help"])), 0);
}

#[test]
fn spectrum_prints_json() {
    let out = qzeno(&["spectrum", "--config", config("xx_single.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.is_object());
}

#[test]
fn preset_then_classify() {
    let dir = tempfile::tempdir().unwrap();
    let out = qzeno(&[
        "preset",
        "fig2",
        "--out",
        dir.path().to_str().unwrap(),
        "--workers",
        "1",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = dir.path().join("fig2.csv");
    let out = qzeno(&["classify", "--in", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let panels: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(panels.as_array().unwrap().len(), 4);
}
