//! Scenario engine for smoothed-classifier experiments: sphere sweeps over
//! interference distances, the 1D construction verifier, and bound-validation
//! runs, all emitting deterministic CSV/JSON/SVG artifacts.

pub mod emit;
pub mod scenario;
pub mod spheres;
pub mod sweep;
pub mod validation;
pub mod verify1d;

use std::path::{Path, PathBuf};

use anyhow::Result;
use serde::Serialize;

use scenario::Scenario;

/// Process exit codes: 0 success, 2 invalid config, 3 bound violation
/// detected, 4 partial failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    InvalidConfig,
    BoundViolation,
    PartialFailure,
}

impl ExitStatus {
    pub fn code(&self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::InvalidConfig => 2,
            ExitStatus::BoundViolation => 3,
            ExitStatus::PartialFailure => 4,
        }
    }
}

#[derive(Debug)]
pub struct RunReport {
    pub status: ExitStatus,
    pub outputs: Vec<PathBuf>,
    pub summary: String,
}

#[derive(Serialize)]
struct Manifest<'a, E: Serialize, C: Serialize> {
    scenario: &'a Scenario,
    outputs: Vec<String>,
    violations: usize,
    failures: &'a [E],
    configs: &'a [C],
}

/// Runs a parsed scenario, writing its artifacts under `out_dir`.
pub fn run_scenario(sc: &Scenario, out_dir: &Path) -> Result<RunReport> {
    std::fs::create_dir_all(out_dir)?;
    match sc {
        Scenario::SphereSweep(s) => {
            let result = sweep::run_sweep(s)?;
            let mut outputs = Vec::new();

            let csv_path = out_dir.join("sweep.csv");
            emit::write_text(
                &csv_path,
                &emit::sweep_csv(&result.cells, s.seed, s.mc_risk_samples),
            )?;
            outputs.push(csv_path);

            let flags_path = out_dir.join("flags.csv");
            emit::write_text(
                &flags_path,
                &emit::flags_csv(&result.flags, s.seed, s.mc_risk_samples),
            )?;
            outputs.push(flags_path);

            for &beta in &s.betas {
                let series: Vec<emit::SvgSeries> = s
                    .zetas
                    .iter()
                    .map(|&zeta| {
                        let points = result
                            .cells
                            .iter()
                            .filter(|c| c.zeta == zeta && c.beta == beta)
                            .map(|c| (c.alpha, c.diff))
                            .collect();
                        let dashed = result
                            .flags
                            .iter()
                            .find(|f| f.zeta == zeta && f.beta == beta)
                            .map(|f| f.dashed)
                            .unwrap_or(false);
                        emit::SvgSeries {
                            label: format!("zeta {zeta}"),
                            points,
                            dashed,
                        }
                    })
                    .collect();
                let svg = emit::line_plot_svg(
                    &format!("excess-risk difference vs alpha (beta = {beta})"),
                    "alpha",
                    "delta(alpha, beta) - delta(0, beta)",
                    &series,
                );
                let path = emit::sweep_svg_path(out_dir, beta);
                emit::write_text(&path, &svg)?;
                outputs.push(path);
            }

            let manifest_path = out_dir.join("manifest.json");
            emit::write_manifest(
                &manifest_path,
                &Manifest {
                    scenario: sc,
                    outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
                    violations: 0,
                    failures: &result.failures,
                    configs: &result.configs,
                },
            )?;
            outputs.push(manifest_path);

            let status = if result.failures.is_empty() {
                ExitStatus::Success
            } else {
                ExitStatus::PartialFailure
            };
            let dashed = result.flags.iter().filter(|f| f.dashed).count();
            Ok(RunReport {
                status,
                outputs,
                summary: format!(
                    "sweep: {} cells, {} dashed rows, {} failures",
                    result.cells.len(),
                    dashed,
                    result.failures.len()
                ),
            })
        }
        Scenario::OneDimConstruction(s) => {
            let verdict =
                verify1d::verify_1d_construction(s.omega, s.alpha, s.beta, s.widened_gap)?;
            let path = out_dir.join("verdict.json");
            emit::write_manifest(&path, &verdict)?;
            let summary = format!(
                "1d construction: {} (unaugmented risk {}, augmented risk {})",
                if verdict.all_pass { "PASS" } else { "FAIL" },
                verdict.construction.unaugmented_risk,
                verdict.construction.augmented_risk
            );
            Ok(RunReport {
                status: ExitStatus::Success,
                outputs: vec![path],
                summary,
            })
        }
        Scenario::BoundValidation(s) => {
            let result = validation::run_bound_validation(s)?;
            let csv_path = out_dir.join("bounds.csv");
            emit::write_text(&csv_path, &emit::bounds_csv(&result.rows))?;
            let manifest_path = out_dir.join("manifest.json");
            emit::write_manifest(
                &manifest_path,
                &Manifest {
                    scenario: sc,
                    outputs: vec![csv_path.display().to_string()],
                    violations: result.violations,
                    failures: &result.failures,
                    configs: &[] as &[u8],
                },
            )?;
            let status = if !result.failures.is_empty() {
                ExitStatus::PartialFailure
            } else if result.violations > 0 {
                ExitStatus::BoundViolation
            } else {
                ExitStatus::Success
            };
            Ok(RunReport {
                status,
                outputs: vec![csv_path, manifest_path],
                summary: format!(
                    "bound validation: {} rows, {} violations, {} failures",
                    result.rows.len(),
                    result.violations,
                    result.failures.len()
                ),
            })
        }
        Scenario::InexactLearning(s) => {
            let result = validation::run_inexact_learning(s)?;
            let csv_path = out_dir.join("inexact.csv");
            emit::write_text(&csv_path, &emit::inexact_csv(&result.rows))?;
            let manifest_path = out_dir.join("manifest.json");
            emit::write_manifest(
                &manifest_path,
                &Manifest {
                    scenario: sc,
                    outputs: vec![csv_path.display().to_string()],
                    violations: result.violations,
                    failures: &result.failures,
                    configs: &[] as &[u8],
                },
            )?;
            let status = if !result.failures.is_empty() {
                ExitStatus::PartialFailure
            } else if result.violations > 0 {
                ExitStatus::BoundViolation
            } else {
                ExitStatus::Success
            };
            Ok(RunReport {
                status,
                outputs: vec![csv_path, manifest_path],
                summary: format!(
                    "inexact learning: {} rows, {} violations, {} failures",
                    result.rows.len(),
                    result.violations,
                    result.failures.len()
                ),
            })
        }
    }
}
