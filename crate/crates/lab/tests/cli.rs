use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str], env_out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lab"));
    cmd.args(args).env_remove("QNOISE_OUT_DIR");
    if let Some(dir) = env_out {
        cmd.env("QNOISE_OUT_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn catalog_lists_every_experiment_with_an_anchor() {
    let out = lab(&["catalog", "--json"], None);
    assert!(out.status.success());
    let list: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert!(list.len() >= 9);
    for entry in &list {
        assert!(!entry["anchor"].as_str().unwrap().is_empty());
        assert!(entry["columns"].as_array().is_some_and(|c| !c.is_empty()));
    }
    let text = lab(&["catalog"], None);
    assert!(String::from_utf8_lossy(&text.stdout).contains("elections-contrast"));
}

#[test]
fn invalid_configs_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("empty.json", "{}"),
        ("unknown.json", r#"{"experiment": "no-such-thing"}"#),
        ("typo.json", r#"{"experiment": "haar-height", "sed": 1}"#),
        ("param.json", r#"{"experiment": "haar-height", "params": {"n": 40}}"#),
        ("zero.json", r#"{"experiment": "majority-repair", "trials": 0}"#),
    ];
    for (name, body) in cases {
        let path = write_config(dir.path(), name, body);
        assert_eq!(lab(&["validate", &path], None).status.code(), Some(2), "{name}");
        assert_eq!(lab(&["run", &path], None).status.code(), Some(2), "{name}");
    }
    let missing = dir.path().join("absent.json");
    assert_eq!(lab(&["validate", missing.to_str().unwrap()], None).status.code(), Some(2));
}

#[test]
fn run_writes_csv_and_summary_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "cfg.json", r#"{"experiment": "majority-repair", "seed": 3, "trials": 500}"#);
    let first = dir.path().join("a");
    let second = dir.path().join("b");
    assert!(lab(&["run", &cfg, "--out", first.to_str().unwrap()], None).status.success());
    assert!(lab(&["run", &cfg, "--threads", "1"], Some(&second)).status.success());
    let csv_a = std::fs::read(first.join("majority-repair.csv")).unwrap();
    let csv_b = std::fs::read(second.join("majority-repair.csv")).unwrap();
    assert_eq!(csv_a, csv_b);
    assert!(csv_a.starts_with(b"copies,flip_p,rate,std_error,exact\n"));
    let summary: Value =
        serde_json::from_slice(&std::fs::read(first.join("majority-repair.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 3);
    assert_eq!(summary["trials"], 500);
    assert_eq!(summary["partial"], false);
    assert_eq!(summary["config_hash"].as_str().unwrap().len(), 64);

    // A different seed changes the sampled rates.
    let third = dir.path().join("c");
    assert!(lab(&["run", &cfg, "--seed", "4", "--out", third.to_str().unwrap()], None).status.success());
    assert_ne!(csv_a, std::fs::read(third.join("majority-repair.csv")).unwrap());
}

#[test]
fn exceeded_runtime_cap_exits_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "slow.json",
        r#"{"experiment": "majority-repair", "trials": 5000000, "time_cap_secs": 0}"#,
    );
    let out = lab(&["run", &cfg, "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(3));
    let summary: Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("majority-repair.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["partial"], true);
}

#[test]
fn every_default_config_validates() {
    let out = lab(&["catalog", "--json"], None);
    let list: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for entry in list {
        let id = entry["id"].as_str().unwrap();
        let body = serde_json::json!({ "experiment": id, "params": entry["defaults"] }).to_string();
        let path = write_config(dir.path(), &format!("{id}.json"), &body);
        let out = lab(&["validate", &path], None);
        assert!(out.status.success(), "{id}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
