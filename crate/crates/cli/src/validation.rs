//! Bound-validation runs: Monte-Carlo excess risks against the universal
//! upper bound, and eta-perturbed classifiers against the two-sided inexact
//! bounds plus the disagreement-mass bound.

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use smoothlab_core::bounds::{
    general_g_bound, inexact_risk_bounds, main_upper_bound, PartitionSummary,
};
use smoothlab_core::classifiers::{
    soft_convolve, Conditional, HardClassifier, PerturbedClassifier,
};
use smoothlab_core::noise::NoiseModel;
use smoothlab_core::numeric::{mix_seed, normal_ci_z};
use smoothlab_core::risk::{closed_form_excess, excess_risk, risk, risk_auto, DataMeasure};
use smoothlab_core::smoothing::{EvalMode, SmoothingConfig};
use smoothlab_core::Error as CoreError;

use crate::scenario::{BoundValidationScenario, InexactLearningScenario};
use crate::spheres::sample_sphere_config;

/// One validated scenario row: margin = bound − Δ estimate, with the number
/// of Monte-Carlo standard errors it would take to call it a violation.
#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub scenario: usize,
    pub zeta: f64,
    pub actual_zeta: f64,
    pub balls: usize,
    pub tau: f64,
    pub bound_tau: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub delta_ci_low: f64,
    pub delta_ci_high: f64,
    pub bound: f64,
    pub margin: f64,
    pub violation: bool,
    pub mode: EvalMode,
    pub mc_samples: usize,
    pub seed: u64,
}

#[derive(Debug)]
pub struct ValidationResult {
    pub rows: Vec<BoundRow>,
    pub violations: usize,
    pub failures: Vec<String>,
}

pub fn run_bound_validation(sc: &BoundValidationScenario) -> Result<ValidationResult> {
    let domain = sc.domain.to_box()?;
    let px = DataMeasure::UniformBox(domain.clone());

    let jobs: Vec<usize> = (0..sc.num_scenarios).collect();
    let outcomes: Vec<Result<BoundRow, String>> = jobs
        .par_iter()
        .map(|&i| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(sc.seed, &[0x6276, i as u64]));
            let zeta = sc.zetas[i % sc.zetas.len()];
            let tau: f64 = rng.random_range(0.05..0.45);
            let alpha: f64 = rng.random_range(0.0..sc.alpha_max);
            let beta: f64 = rng.random_range(0.0..sc.beta_max);
            let cfg_seed = mix_seed(sc.seed, &[0x6266, i as u64]);
            run_bound_case(sc, &px, i, zeta, tau, alpha, beta, cfg_seed)
                .map_err(|e| format!("scenario {i}: {e}"))
        })
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for out in outcomes {
        match out {
            Ok(r) => rows.push(r),
            Err(e) => failures.push(e),
        }
    }
    let violations = rows.iter().filter(|r| r.violation).count();
    Ok(ValidationResult {
        rows,
        violations,
        failures,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_bound_case(
    sc: &BoundValidationScenario,
    px: &DataMeasure,
    index: usize,
    zeta: f64,
    tau: f64,
    alpha: f64,
    beta: f64,
    seed: u64,
) -> Result<BoundRow> {
    let domain = sc.domain.to_box()?;
    let c = sample_sphere_config(&domain, zeta, sc.radius, sc.attempts, seed, tau)?;
    let actual_zeta = c.lower_interference_distance().unwrap_or(f64::INFINITY);
    let h = Conditional::BallUnion(c.clone());

    let cfg = |mode| SmoothingConfig {
        family: sc.family,
        alpha,
        beta,
        mode,
        mc_samples: sc.mc_vote_samples,
        seed: mix_seed(seed, &[1]),
    };
    let delta = match excess_risk(&h, px, &cfg(EvalMode::Exact), sc.mc_risk_samples) {
        Ok(r) => r,
        Err(CoreError::ExactUnsupported(_)) => {
            excess_risk(&h, px, &cfg(EvalMode::MonteCarlo), sc.mc_risk_samples)?
        }
        Err(e) => return Err(e.into()),
    };

    // The bound holds for every confidence level up to the conditional's tau;
    // report the smallest bound over the configured grid.
    let alpha_model = NoiseModel::maybe(sc.family, alpha, px.dim())?;
    let beta_model = NoiseModel::maybe(sc.family, beta, px.dim())?;
    let mut best = f64::INFINITY;
    let mut best_tau = tau;
    let mut levels: Vec<f64> = sc.tau_grid.iter().copied().filter(|t| *t <= tau).collect();
    if levels.is_empty() {
        // Fall back to the conditional's own confidence margin.
        levels.push(tau);
    }
    for t in levels {
        let parts = PartitionSummary {
            tau: t,
            ..PartitionSummary::from_ball_union(&c)
        };
        let rep = main_upper_bound(&parts, px, alpha_model.as_ref(), beta_model.as_ref())?;
        if rep.bound_value < best {
            best = rep.bound_value;
            best_tau = t;
        }
    }

    let sigma = delta.half_width() / normal_ci_z(0.99);
    let margin = best - delta.value;
    Ok(BoundRow {
        scenario: index,
        zeta,
        actual_zeta,
        balls: c.balls().len(),
        tau,
        bound_tau: best_tau,
        alpha,
        beta,
        delta: delta.value,
        delta_ci_low: delta.ci_low,
        delta_ci_high: delta.ci_high,
        bound: best,
        margin,
        violation: margin < -4.0 * sigma,
        mode: delta.mode,
        mc_samples: sc.mc_risk_samples,
        seed: sc.seed,
    })
}

/// One eta-perturbed classifier checked against the bound sandwich.
#[derive(Debug, Clone, Serialize)]
pub struct InexactRow {
    pub scenario: usize,
    pub eta: f64,
    pub tau: f64,
    pub alpha: f64,
    pub beta: f64,
    pub actual_zeta: f64,
    pub balls: usize,
    pub delta_g: f64,
    pub sigma: f64,
    pub lower: f64,
    pub upper: f64,
    pub sandwich_ok: bool,
    pub general_bound: f64,
    pub general_ok: bool,
    pub mode: EvalMode,
    pub mc_samples: usize,
    pub seed: u64,
}

#[derive(Debug)]
pub struct InexactResult {
    pub rows: Vec<InexactRow>,
    pub violations: usize,
    pub failures: Vec<String>,
}

pub fn run_inexact_learning(sc: &InexactLearningScenario) -> Result<InexactResult> {
    let domain = sc.domain.to_box()?;
    let px = DataMeasure::UniformBox(domain.clone());
    // Stay inside the separation regime the two-sided bounds require.
    let zeta = 2.0 * sc.alpha.max(sc.beta) + 1.0;

    let jobs: Vec<usize> = (0..sc.num_classifiers).collect();
    let outcomes: Vec<Result<InexactRow, String>> = jobs
        .par_iter()
        .map(|&i| {
            run_inexact_case(sc, &px, &domain, i, zeta).map_err(|e| format!("classifier {i}: {e}"))
        })
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for out in outcomes {
        match out {
            Ok(r) => rows.push(r),
            Err(e) => failures.push(e),
        }
    }
    let violations = rows
        .iter()
        .filter(|r| !r.sandwich_ok || !r.general_ok)
        .count();
    Ok(InexactResult {
        rows,
        violations,
        failures,
    })
}

fn run_inexact_case(
    sc: &InexactLearningScenario,
    px: &DataMeasure,
    domain: &smoothlab_core::geometry::BoxDomain,
    index: usize,
    zeta: f64,
) -> Result<InexactRow> {
    let eta = sc.etas[index % sc.etas.len()];
    let seed = mix_seed(sc.seed, &[0x6965, index as u64]);
    let c = sample_sphere_config(domain, zeta, sc.radius, sc.attempts, seed, sc.tau)?;
    let h = Conditional::BallUnion(c.clone());
    let dim = px.dim();
    let alpha_model = NoiseModel::maybe(sc.family, sc.alpha, dim)?;
    let beta_model = NoiseModel::new(sc.family, sc.beta, dim)?;

    // The perturbed classifier g around h * p_alpha, smoothed by beta votes.
    let soft = soft_convolve(&h, alpha_model.as_ref())?;
    let g = PerturbedClassifier::new(soft.clone(), eta, domain, sc.bumps, mix_seed(seed, &[2]))?;
    let pipeline = HardClassifier::McSmoothed {
        base: Box::new(HardClassifier::PerturbedThreshold(g.clone())),
        noise: beta_model.clone(),
        samples: sc.mc_vote_samples,
        seed: mix_seed(seed, &[3]),
    };

    let smoothed = risk_auto(&pipeline, &h, px, sc.mc_risk_samples, mix_seed(seed, &[4]))?;
    let base = risk(&h.threshold(), &h, px, EvalMode::Exact, 0, 0)?;
    let delta_g = smoothed.value - base.value;
    let sigma = smoothed.half_width() / normal_ci_z(0.99);

    let bounds = inexact_risk_bounds(&c, px, alpha_model.as_ref(), Some(&beta_model), eta)?;
    let sandwich_ok =
        delta_g >= bounds.lower - 3.0 * sigma && delta_g <= bounds.upper + 3.0 * sigma;

    let cf = closed_form_excess(&c, px, alpha_model.as_ref(), Some(&beta_model))?;
    let gb = general_g_bound(
        &h,
        |x| g.eval(x),
        px,
        alpha_model.as_ref(),
        cf.value,
        sc.mc_risk_samples,
        mix_seed(seed, &[5]),
    )?;
    let general_ok = delta_g <= gb.bound + 3.0 * sigma;

    Ok(InexactRow {
        scenario: index,
        eta,
        tau: sc.tau,
        alpha: sc.alpha,
        beta: sc.beta,
        actual_zeta: c.lower_interference_distance().unwrap_or(f64::INFINITY),
        balls: c.balls().len(),
        delta_g,
        sigma,
        lower: bounds.lower,
        upper: bounds.upper,
        sandwich_ok,
        general_bound: gb.bound,
        general_ok,
        mode: smoothed.mode,
        mc_samples: sc.mc_risk_samples,
        seed: sc.seed,
    })
}
