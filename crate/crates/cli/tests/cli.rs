//! End-to-end CLI behavior: exit codes, output files, and overrides.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_smoothlab")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("smoothlab_cli_{}_{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn exit_codes_follow_the_contract() {
    use smoothlab::ExitStatus;
    assert_eq!(ExitStatus::Success.code(), 0);
    assert_eq!(ExitStatus::InvalidConfig.code(), 2);
    assert_eq!(ExitStatus::BoundViolation.code(), 3);
    assert_eq!(ExitStatus::PartialFailure.code(), 4);
}

#[test]
fn invalid_config_exits_with_code_2() {
    let dir = tmp("bad");
    let cfg = dir.join("bad.json");
    std::fs::write(
        &cfg,
        r#"{"kind": "SphereSweep", "seed": 1, "unknown_key": 3}"#,
    )
    .unwrap();
    let status = Command::new(bin())
        .args([
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    let status = Command::new(bin())
        .args([
            "run",
            "--config",
            "/nonexistent.json",
            "--out",
            dir.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn forced_exact_mode_on_intractable_cells_is_a_partial_failure() {
    let dir = tmp("exact");
    let cfg = dir.join("sweep.json");
    // zeta 0 with beta past the separation scale has no closed-form region.
    std::fs::write(
        &cfg,
        r#"{"kind": "SphereSweep", "seed": 3, "zetas": [0.0],
            "alphas": [0.0, 2.0], "betas": [16.0], "configs_per_zeta": 1,
            "mc_risk_samples": 1000, "mc_vote_samples": 50}"#,
    )
    .unwrap();
    let out = dir.join("out");
    let status = Command::new(bin())
        .args([
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--mode",
            "exact",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(4), "expected partial-failure exit");
    let manifest = std::fs::read_to_string(out.join("manifest.json")).unwrap();
    assert!(manifest.contains("failures"));
    assert!(manifest.contains("exact evaluation unsupported"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sample_spheres_writes_deterministic_config() {
    let dir = tmp("spheres");
    let out1 = dir.join("a.json");
    let out2 = dir.join("b.json");
    for out in [&out1, &out2] {
        let status = Command::new(bin())
            .args([
                "sample-spheres",
                "--zeta",
                "20",
                "--seed",
                "7",
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert_eq!(a, b);
    assert!(String::from_utf8(a).unwrap().contains("\"balls\""));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_1d_reports_pass_for_the_feasible_point() {
    let dir = tmp("verify");
    let output = Command::new(bin())
        .args([
            "verify-1d",
            "--omega",
            "0.23",
            "--alpha",
            "0.1",
            "--beta",
            "0.93",
            "--out",
            dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("VERDICT: PASS"), "stdout: {stdout}");
    assert!(stdout.contains("risks: unaugmented 0.92"));
    let verdict = std::fs::read_to_string(dir.join("verdict.json")).unwrap();
    assert!(verdict.contains("\"all_pass\": true"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn scenario_out_field_is_honored_without_the_flag() {
    let dir = tmp("cfgout");
    let out = dir.join("results");
    let cfg = dir.join("one.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"kind": "OneDimConstruction", "omega": 0.23, "alpha": 0.1, "beta": 0.93, "out": "{}"}}"#,
            out.display()
        ),
    )
    .unwrap();
    let status = Command::new(bin())
        .args(["run", "--config", cfg.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(out.join("verdict.json").exists());

    // Neither --out nor an `out` field is an invalid configuration.
    let bare = dir.join("bare.json");
    std::fs::write(
        &bare,
        r#"{"kind": "OneDimConstruction", "omega": 0.23, "alpha": 0.1, "beta": 0.93}"#,
    )
    .unwrap();
    let status = Command::new(bin())
        .args(["run", "--config", bare.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn one_dim_scenario_runs_through_the_engine() {
    let dir = tmp("onedim");
    let cfg = dir.join("one.json");
    std::fs::write(
        &cfg,
        r#"{"kind": "OneDimConstruction", "omega": 0.23, "alpha": 0.1, "beta": 0.93}"#,
    )
    .unwrap();
    let out = dir.join("out");
    let status = Command::new(bin())
        .args([
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(out.join("verdict.json").exists());
    std::fs::remove_dir_all(&dir).ok();
}
