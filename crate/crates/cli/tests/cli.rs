use std::process::{Command, Output};

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(args)
        .output()
        .expect("spawn verify")
}

#[test]
fn passing_scenario_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = verify(&["--scenario", "group-cohomology", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["scenario"], "group-cohomology");
    assert_eq!(v["status"], "pass");
    let check = &v["checks"][0];
    for key in [
        "name",
        "computed",
        "expected",
        "provenance",
        "abs_error",
        "tolerance",
        "runtime_ms",
    ] {
        assert!(check.get(key).is_some(), "missing {key}");
    }
    assert!(check["runtime_ms"].is_null());
    assert!(String::from_utf8_lossy(&out.stdout).contains("group-cohomology"));
}

#[test]
fn unknown_scenario_is_usage_error() {
    assert_eq!(verify(&["--scenario", "no-such-thing"]).status.code(), Some(2));
    assert_eq!(
        verify(&["--scenario", "cech", "--quad-order", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(verify(&["--bogus"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_is_io_error_without_partial_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("report.json");
    let out = verify(&["--scenario", "cech", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!path.exists());
    assert!(!dir.path().join("missing").exists());
}

#[test]
fn tiny_tolerance_fails_floating_checks() {
    let out = verify(&["--scenario", "kac-moody", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    // exact scenarios are unaffected by the override
    assert_eq!(verify(&["--scenario", "cech", "--tol", "1e-30"]).status.code(), Some(0));
}

#[test]
fn toml_config_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "scenario = \"no-such-thing\"\nseed = 3\ntimings = true\n").unwrap();
    let path = dir.path().join("r.json");
    let out = verify(&[
        "--config",
        cfg.to_str().unwrap(),
        "--scenario",
        "cech",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert!(v["checks"][0]["runtime_ms"].is_number());

    std::fs::write(&cfg, "colour = \"blue\"\n").unwrap();
    assert_eq!(verify(&["--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn same_seed_same_report() {
    let a = verify(&["--scenario", "spectral-flow", "--seed", "5"]);
    let b = verify(&["--scenario", "spectral-flow", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
