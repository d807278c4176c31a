use std::path::{Path, PathBuf};
use std::process::Command;

use quasistable::runner::{self, Experiment};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quasistable"))
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn summary(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(format!("{name}.summary.json"))).unwrap()).unwrap()
}

#[test]
fn spectrum_check_reports_k2() {
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["run", configs().join("spectrum_check.json").to_str().unwrap(), "--out"])
        .arg(out.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let s = summary(out.path(), "spectrum_check");
    let k2 = s["result"]["bounds"]["k2"].as_f64().unwrap();
    assert!((k2 - 0.1).abs() < 1e-15);
    assert_eq!(s["result"]["bounds"]["k1"], "-inf");
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(out.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["outputs"][0], "spectrum_check.csv");
    assert_eq!(manifest["exit_code"], 0);
    assert!(!out.path().join("manifest.json.tmp").exists());
}

#[test]
fn zero_observable_is_identically_zero() {
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["run", configs().join("dichotomy_zero.json").to_str().unwrap(), "--out"])
        .arg(out.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert_eq!(summary(out.path(), "dichotomy_zero")["verdict"], "identically_zero");
}

#[test]
fn negative_time_exits_one_citing_semigroup() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "neg.json",
        r#"{"experiment": "evolve", "complex_mass": {"mass": 1, "width": 0.2},
            "schedule": {"kind": "times", "values": [0.5, -1.0]}}"#,
    );
    let out = bin().args(["run", cfg.to_str().unwrap(), "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("schedule.values[1]") && err.contains("semigroup"), "{err}");
}

#[test]
fn inconclusive_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    // A coarse grid sampled far out in time: the projector expectation
    // decays below the threshold over a long interval.
    let cfg = write(
        dir.path(),
        "late.json",
        r#"{"experiment": "dichotomy", "complex_mass": {"mass": 1, "width": 2.0},
            "grid": {"mode": "one_d_reduced", "u_max": 8, "n": 32},
            "observable": {"kind": "position_projector", "x_lo": -1, "x_hi": 1},
            "schedule": {"kind": "t_grid", "start": 0, "end": 60, "count": 200}}"#,
    );
    let out = bin().args(["run", cfg.to_str().unwrap(), "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stdout));
    let s = summary(dir.path(), "dichotomy");
    assert_eq!(s["verdict"], "inconclusive");
    assert!(s["result"]["report"]["recommendation"].is_string());
}

#[test]
fn validate_aggregates_errors_with_paths() {
    let errors = runner::validate(
        r#"{"experiment": "warp", "complex_mass": {"mass": 1, "width": -0.1, "typo": 1},
            "grid": {"mode": "three_d", "n": 0}, "tolerances": {"zero_epsilon": 1}}"#,
    )
    .unwrap_err();
    let paths: Vec<&str> = errors.iter().map(|e| e.path.as_str()).collect();
    for expected in ["experiment", "complex_mass.width", "complex_mass.typo", "grid.n", "tolerances.zero_epsilon"] {
        assert!(paths.contains(&expected), "{expected} missing from {paths:?}");
    }
    let unknown = errors.iter().find(|e| e.path == "experiment").unwrap();
    for e in Experiment::ALL {
        assert!(unknown.message.contains(e.as_str()));
    }
}

#[test]
fn validate_accepts_minimal_and_all_shipped_configs() {
    let cfg = runner::validate(r#"{"experiment": "spectrum-check", "complex_mass": {"mass": 1, "width": 0.2}}"#).unwrap();
    assert_eq!(cfg.name(), "spectrum-check");
    for entry in std::fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let out = bin().args(["validate", path.to_str().unwrap()]).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{}: {}", path.display(), String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn validate_cli_reports_width_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", r#"{"experiment": "evolve", "complex_mass": {"mass": 1, "width": -1}}"#);
    let out = bin().args(["validate", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("complex_mass.width"), "{err}");
    assert!(err.contains("schedule"), "{err}");
}

#[test]
fn cross_field_requirements() {
    let errors = runner::validate(
        r#"{"experiment": "tails", "complex_mass": {"mass": 1, "width": 0.2},
            "grid": {"mode": "three_d", "n": 8}, "spin": 0.5,
            "observable": {"kind": "position_projector", "x_lo": -1, "x_hi": 1},
            "schedule": {"kind": "ray", "direction": [1, 0, 0], "t": 0, "x_values": [1]}}"#,
    )
    .unwrap_err();
    let paths: Vec<&str> = errors.iter().map(|e| e.path.as_str()).collect();
    for expected in ["schedule.kind", "grid.mode", "spin", "state.family"] {
        assert!(paths.contains(&expected), "{expected} missing from {paths:?}");
    }
}

#[test]
fn env_var_sets_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .env("QUASISTABLE_OUT", dir.path())
        .args(["run", configs().join("spectrum_check.json").to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(dir.path().join("spectrum_check.csv").exists());
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn deterministic_runs_are_byte_identical_across_thread_counts() {
    let cfg = configs().join("cone_scan.json");
    let read = |extra: &[&str]| {
        let out = tempfile::tempdir().unwrap();
        let status = bin()
            .args(["run", cfg.to_str().unwrap(), "--out"])
            .arg(out.path())
            .args(extra)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out.path().join("cone_scan.csv")).unwrap()
    };
    let a = read(&["--deterministic"]);
    assert_eq!(a, read(&["--deterministic"]));
    assert_eq!(a, read(&["--threads", "3"]));
}

#[test]
fn selftest_subcommand_passes() {
    let out = tempfile::tempdir().unwrap();
    let status = bin().args(["selftest", "--seed", "9", "--out"]).arg(out.path()).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = std::fs::read_to_string(out.path().join("selftest.csv")).unwrap();
    assert!(csv.starts_with("check,samples,max_defect,tolerance,passed\n"));
    assert!(!csv.contains(",false\n"));
}

#[test]
fn every_spacetime_row_carries_class_and_flag() {
    let out = tempfile::tempdir().unwrap();
    bin()
        .args(["run", configs().join("cone_scan.json").to_str().unwrap(), "--out"])
        .arg(out.path())
        .status()
        .unwrap();
    let csv = std::fs::read_to_string(out.path().join("cone_scan.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 7);
        match cols[4] {
            "spacelike" => assert_eq!(cols[5], "false"),
            "in_forward_cone" => assert_eq!(cols[5], "true"),
            other => panic!("unexpected class {other}"),
        }
    }
}
