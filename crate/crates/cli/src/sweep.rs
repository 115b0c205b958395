//! The sphere-sweep engine: samples ball-union data distributions per
//! interference distance, evaluates the excess-risk difference
//! Δ_{α,β} − Δ_{0,β} over the (α, β) grid, and classifies each (ζ, β) row as
//! dashed (augmentation helps somewhere, with interval-aware certainty) or
//! solid.

use anyhow::Result;
use rayon::prelude::*;
use serde::Serialize;

use smoothlab_core::classifiers::Conditional;
use smoothlab_core::numeric::mix_seed;
use smoothlab_core::risk::{excess_risk, DataMeasure, RiskReport};
use smoothlab_core::smoothing::{EvalMode, SmoothingConfig};
use smoothlab_core::Error as CoreError;

use crate::scenario::{CellMode, SphereSweepScenario};
use crate::spheres::sample_sphere_config;

/// One aggregated grid cell (mean over the sampled configurations).
#[derive(Debug, Clone, Serialize)]
pub struct SweepCell {
    pub zeta: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Mean excess risk Δ_{α,β} across configurations.
    pub delta: f64,
    pub delta_ci_low: f64,
    pub delta_ci_high: f64,
    /// Mean Δ_{0,β} across configurations.
    pub delta0: f64,
    /// Mean difference Δ_{α,β} − Δ_{0,β}.
    pub diff: f64,
    pub diff_ci_low: f64,
    pub diff_ci_high: f64,
    /// "exact" only when every configuration evaluated in closed form.
    pub mode: EvalMode,
}

/// Dashed/solid flag for one (ζ, β) row.
#[derive(Debug, Clone, Serialize)]
pub struct SweepFlag {
    pub zeta: f64,
    pub beta: f64,
    /// True when some α > 0 has diff with its interval's upper edge below 0.
    pub dashed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigInfo {
    pub zeta: f64,
    pub config_index: usize,
    pub balls: usize,
    pub actual_zeta: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellFailure {
    pub zeta: f64,
    pub config_index: usize,
    pub alpha: f64,
    pub beta: f64,
    pub error: String,
}

#[derive(Debug)]
pub struct SweepResult {
    pub cells: Vec<SweepCell>,
    pub flags: Vec<SweepFlag>,
    pub configs: Vec<ConfigInfo>,
    pub failures: Vec<CellFailure>,
}

struct CellEval {
    delta: RiskReport,
}

fn eval_delta(
    h: &Conditional,
    px: &DataMeasure,
    sc: &SphereSweepScenario,
    alpha: f64,
    beta: f64,
    seed: u64,
) -> Result<CellEval, CoreError> {
    let base_cfg = |mode| SmoothingConfig {
        family: sc.family,
        alpha,
        beta,
        mode,
        mc_samples: sc.mc_vote_samples,
        seed,
    };
    let delta = match sc.mode {
        CellMode::Exact => excess_risk(h, px, &base_cfg(EvalMode::Exact), sc.mc_risk_samples)?,
        CellMode::Mc => excess_risk(h, px, &base_cfg(EvalMode::MonteCarlo), sc.mc_risk_samples)?,
        CellMode::Auto => {
            match excess_risk(h, px, &base_cfg(EvalMode::Exact), sc.mc_risk_samples) {
                Ok(r) => r,
                Err(CoreError::ExactUnsupported(_)) => {
                    excess_risk(h, px, &base_cfg(EvalMode::MonteCarlo), sc.mc_risk_samples)?
                }
                Err(e) => return Err(e),
            }
        }
    };
    Ok(CellEval { delta })
}

/// Mean of independent reports; the interval half-width combines in
/// quadrature and shrinks with the number of configurations.
fn aggregate(reports: &[&RiskReport]) -> (f64, f64, EvalMode) {
    let k = reports.len() as f64;
    let mean = reports.iter().map(|r| r.value).sum::<f64>() / k;
    let half = reports
        .iter()
        .map(|r| r.half_width().powi(2))
        .sum::<f64>()
        .sqrt()
        / k;
    let mode = if reports.iter().all(|r| r.mode == EvalMode::Exact) {
        EvalMode::Exact
    } else {
        EvalMode::MonteCarlo
    };
    (mean, half, mode)
}

pub fn run_sweep(sc: &SphereSweepScenario) -> Result<SweepResult> {
    let domain = sc.domain.to_box()?;
    let px = DataMeasure::UniformBox(domain.clone());

    // Sample every configuration up front (deterministic in the seed).
    let mut configs = Vec::new();
    let mut conditionals = Vec::new();
    for (zi, &zeta) in sc.zetas.iter().enumerate() {
        for ci in 0..sc.configs_per_zeta {
            let cfg_seed = mix_seed(sc.seed, &[0x636f_6e66, zi as u64, ci as u64]);
            let c = sample_sphere_config(&domain, zeta, sc.radius, sc.attempts, cfg_seed, sc.tau)?;
            configs.push(ConfigInfo {
                zeta,
                config_index: ci,
                balls: c.balls().len(),
                actual_zeta: c.lower_interference_distance().ok(),
            });
            conditionals.push((zi, ci, Conditional::BallUnion(c)));
        }
    }

    // One task per (configuration, beta): the α = 0 baseline is shared
    // across the row, so the whole row evaluates together.
    struct RowOut {
        zi: usize,
        bi: usize,
        per_alpha: Vec<Result<(RiskReport, RiskReport), CellFailure>>,
    }

    type Task<'a> = (usize, &'a (usize, usize, Conditional), usize, f64);
    let tasks: Vec<Task> = conditionals
        .iter()
        .enumerate()
        .flat_map(|(k, c)| {
            sc.betas
                .iter()
                .enumerate()
                .map(move |(bi, &beta)| (k, c, bi, beta))
        })
        .collect();

    let rows: Vec<RowOut> = tasks
        .par_iter()
        .map(|(_, (zi, ci, h), bi, beta)| {
            let zeta = sc.zetas[*zi];
            let seed0 = mix_seed(sc.seed, &[*zi as u64, *ci as u64, u64::MAX, *bi as u64]);
            let base = eval_delta(h, &px, sc, 0.0, *beta, seed0);
            let per_alpha = sc
                .alphas
                .iter()
                .enumerate()
                .map(|(ai, &alpha)| {
                    let fail = |e: &dyn std::fmt::Display| CellFailure {
                        zeta,
                        config_index: *ci,
                        alpha,
                        beta: *beta,
                        error: e.to_string(),
                    };
                    let base = match &base {
                        Ok(b) => b.delta.clone(),
                        Err(e) => return Err(fail(e)),
                    };
                    if alpha == 0.0 {
                        return Ok((base.clone(), base));
                    }
                    let seed = mix_seed(sc.seed, &[*zi as u64, *ci as u64, ai as u64, *bi as u64]);
                    match eval_delta(h, &px, sc, alpha, *beta, seed) {
                        Ok(cell) => Ok((cell.delta, base)),
                        Err(e) => Err(fail(&e)),
                    }
                })
                .collect();
            RowOut {
                zi: *zi,
                bi: *bi,
                per_alpha,
            }
        })
        .collect();

    // Aggregate across configurations of the same zeta.
    let mut cells = Vec::new();
    let mut failures = Vec::new();
    let mut flags = Vec::new();
    for (zi, &zeta) in sc.zetas.iter().enumerate() {
        for (bi, &beta) in sc.betas.iter().enumerate() {
            let mut dashed = false;
            for (ai, &alpha) in sc.alphas.iter().enumerate() {
                let mut deltas = Vec::new();
                let mut bases = Vec::new();
                for row in rows.iter().filter(|r| r.zi == zi && r.bi == bi) {
                    match &row.per_alpha[ai] {
                        Ok((d, b)) => {
                            deltas.push(d);
                            bases.push(b);
                        }
                        Err(f) => failures.push(f.clone()),
                    }
                }
                if deltas.is_empty() {
                    continue;
                }
                let refs: Vec<&RiskReport> = deltas.to_vec();
                let (delta, dhalf, dmode) = aggregate(&refs);
                let brefs: Vec<&RiskReport> = bases.to_vec();
                let (delta0, _, bmode) = aggregate(&brefs);
                let (diff, diff_half) = if alpha == 0.0 {
                    (0.0, 0.0)
                } else {
                    let diffs: Vec<f64> = deltas
                        .iter()
                        .zip(&bases)
                        .map(|(d, b)| d.value - b.value)
                        .collect();
                    let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
                    let half = deltas
                        .iter()
                        .zip(&bases)
                        .map(|(d, b)| d.half_width().powi(2) + b.half_width().powi(2))
                        .sum::<f64>()
                        .sqrt()
                        / diffs.len() as f64;
                    (mean, half)
                };
                if alpha > 0.0 && diff + diff_half < 0.0 {
                    dashed = true;
                }
                let mode = if dmode == EvalMode::Exact && bmode == EvalMode::Exact {
                    EvalMode::Exact
                } else {
                    EvalMode::MonteCarlo
                };
                cells.push(SweepCell {
                    zeta,
                    alpha,
                    beta,
                    delta,
                    delta_ci_low: delta - dhalf,
                    delta_ci_high: delta + dhalf,
                    delta0,
                    diff,
                    diff_ci_low: diff - diff_half,
                    diff_ci_high: diff + diff_half,
                    mode,
                });
            }
            flags.push(SweepFlag { zeta, beta, dashed });
        }
    }

    Ok(SweepResult {
        cells,
        flags,
        configs,
        failures,
    })
}
