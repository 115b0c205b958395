//! Verifies the 1D two-interval construction: the explicit feasibility
//! constraints, the semantic behavior of the smoothed pipelines on the exact
//! 1D engine, and the widened-gap variant where augmentation stops helping.
//!
//! Parameters follow the construction's convention: `alpha` and `beta` are
//! full widths of the uniform noise supports, so the engine runs with ball
//! radii alpha / 2 and beta / 2.

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

use smoothlab_core::classifiers::{Conditional, Piecewise1DConditional};
use smoothlab_core::geometry::BoxDomain;
use smoothlab_core::noise::NoiseFamily;
use smoothlab_core::risk::{risk, DataMeasure};
use smoothlab_core::smoothing::{two_stage, EvalMode, SmoothingConfig};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub name: String,
    pub satisfied: bool,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineRisks {
    /// Gap |c3 - c2| of the profile under test.
    pub gap: f64,
    /// R(Smooth_beta(psi(h))): no augmentation.
    pub unaugmented_risk: f64,
    /// R(Smooth_beta(psi(h * p_alpha))).
    pub augmented_risk: f64,
    /// Smoothed-without-augmentation classifier predicts 0 on the domain.
    pub unaugmented_predicts_zero: bool,
    /// psi(h * p_alpha) predicts 1 across [c1, c4].
    pub augmented_stage_positive: bool,
    /// Full augmented pipeline predicts 1 across [c1, c4].
    pub pipeline_positive: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OneDimVerdict {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    pub constraints: Vec<ConstraintCheck>,
    pub construction: PipelineRisks,
    /// Strict improvement from augmentation on the narrow-gap profile.
    pub augmentation_beneficial: bool,
    pub widened: PipelineRisks,
    /// Augmentation no longer beneficial once the gap exceeds alpha / 2.
    pub widened_not_beneficial: bool,
    pub all_pass: bool,
}

impl OneDimVerdict {
    pub fn failed_conditions(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .constraints
            .iter()
            .filter(|c| !c.satisfied)
            .map(|c| c.name.clone())
            .collect();
        if !self.construction.unaugmented_predicts_zero {
            out.push("unaugmented smoothed classifier must predict 0 everywhere".into());
        }
        if !self.construction.augmented_stage_positive {
            out.push("augmented classifier must predict 1 on [c1, c4]".into());
        }
        if !self.construction.pipeline_positive {
            out.push("augmented smoothed pipeline must predict 1 on [c1, c4]".into());
        }
        if !self.augmentation_beneficial {
            out.push("augmented risk must drop below the unaugmented risk".into());
        }
        if !self.widened_not_beneficial {
            out.push(
                "widened gap must keep the augmented risk at or above the unaugmented risk".into(),
            );
        }
        out
    }
}

/// Builds the profile that is 0 on (-0.5, c1), (c2, c3), (c4, 0.5) and 1 on
/// the two closed intervals, with c1 = -0.25, c2 = -0.25 + omega,
/// c3 = 0.25 - omega, c4 = 0.25.
fn two_interval_profile(omega: f64) -> Result<Piecewise1DConditional> {
    let (c1, c2, c3, c4) = (-0.25, -0.25 + omega, 0.25 - omega, 0.25);
    if c2 < c3 {
        Ok(Piecewise1DConditional::new(
            vec![-0.5, c1, c2, c3, c4, 0.5],
            vec![0.0, 1.0, 0.0, 1.0, 0.0],
        )?)
    } else {
        // omega = 0.25 degenerates to a single positive interval.
        Ok(Piecewise1DConditional::new(
            vec![-0.5, c1, c4, 0.5],
            vec![0.0, 1.0, 0.0],
        )?)
    }
}

/// Profile with the same outer endpoints but a prescribed central gap.
fn gapped_profile(gap: f64) -> Result<Piecewise1DConditional> {
    two_interval_profile((0.5 - gap) / 2.0)
}

fn pipeline_risks(
    h: &Piecewise1DConditional,
    alpha_width: f64,
    beta_width: f64,
) -> Result<PipelineRisks> {
    let hc = Conditional::Piecewise1D(h.clone());
    let px = DataMeasure::UniformBox(BoxDomain::new(vec![-0.25], vec![0.25]).unwrap());
    let cfg = |alpha: f64| SmoothingConfig {
        family: NoiseFamily::UniformBall,
        alpha: alpha / 2.0,
        beta: beta_width / 2.0,
        mode: EvalMode::Exact,
        mc_samples: 0,
        seed: 0,
    };

    let unaug = two_stage(&hc, &cfg(0.0))?;
    let aug = two_stage(&hc, &cfg(alpha_width))?;
    let stage1 = two_stage(
        &hc,
        &SmoothingConfig {
            beta: 0.0,
            ..cfg(alpha_width)
        },
    )?;

    let unaug_risk = risk(&unaug, &hc, &px, EvalMode::Exact, 0, 0)?;
    let aug_risk = risk(&aug, &hc, &px, EvalMode::Exact, 0, 0)?;

    // Probe grids stay 1e-9 inside the closed endpoints; membership exactly
    // at a tie boundary is measure-zero and floating-point fragile.
    let probes = |lo: f64, hi: f64| (0..=400).map(move |k| lo + (hi - lo) * k as f64 / 400.0);
    let (d_lo, d_hi) = (-0.25 + 1e-9, 0.25 - 1e-9);
    let unaugmented_predicts_zero = probes(d_lo, d_hi).all(|x| !unaug.eval(&[x]));
    let augmented_stage_positive = probes(d_lo, d_hi).all(|x| stage1.eval(&[x]));
    let pipeline_positive = probes(d_lo, d_hi).all(|x| aug.eval(&[x]));

    let gap = h
        .piecewise()
        .breaks()
        .windows(2)
        .zip(h.piecewise().values())
        .filter(|(_, v)| **v == 0.0)
        .map(|(w, _)| (w[0], w[1]))
        .find(|(a, b)| *a > -0.25 && *b < 0.25)
        .map(|(a, b)| b - a)
        .unwrap_or(0.0);

    Ok(PipelineRisks {
        gap,
        unaugmented_risk: unaug_risk.value,
        augmented_risk: aug_risk.value,
        unaugmented_predicts_zero,
        augmented_stage_positive,
        pipeline_positive,
    })
}

/// Checks the explicit constraints and the exact-engine semantics for the
/// construction `(omega, alpha, beta)`, then repeats the pipeline on a
/// widened-gap profile (gap > alpha / 2, default alpha / 2 + 0.01).
pub fn verify_1d_construction(
    omega: f64,
    alpha: f64,
    beta: f64,
    widened_gap: Option<f64>,
) -> Result<OneDimVerdict> {
    if omega.is_nan() || omega <= 0.0 || omega > 0.25 {
        bail!("omega must lie in (0, 0.25], got {omega}");
    }
    if alpha.is_nan() || alpha <= 0.0 || beta.is_nan() || beta <= 0.0 {
        bail!("alpha and beta must be positive");
    }
    let constraints = vec![
        ConstraintCheck {
            name: "beta >= 4 omega".into(),
            satisfied: beta >= 4.0 * omega,
            lhs: beta,
            rhs: 4.0 * omega,
        },
        ConstraintCheck {
            name: "alpha >= 4 (0.25 - omega)".into(),
            satisfied: alpha >= 4.0 * (0.25 - omega),
            lhs: alpha,
            rhs: 4.0 * (0.25 - omega),
        },
        ConstraintCheck {
            name: "alpha <= 2 omega".into(),
            satisfied: alpha <= 2.0 * omega,
            lhs: alpha,
            rhs: 2.0 * omega,
        },
        ConstraintCheck {
            name: "beta <= 1".into(),
            satisfied: beta <= 1.0,
            lhs: beta,
            rhs: 1.0,
        },
        ConstraintCheck {
            name: "omega > 0.125".into(),
            satisfied: omega > 0.125,
            lhs: omega,
            rhs: 0.125,
        },
    ];

    let h = two_interval_profile(omega)?;
    let construction = pipeline_risks(&h, alpha, beta)?;
    let augmentation_beneficial = construction.augmented_risk < construction.unaugmented_risk;

    let gap = widened_gap.unwrap_or(alpha / 2.0 + 0.01);
    if gap.is_nan() || gap <= alpha / 2.0 {
        bail!(
            "widened gap must exceed alpha / 2 = {}, got {gap}",
            alpha / 2.0
        );
    }
    if gap.is_nan() || gap >= 0.5 {
        bail!("widened gap must stay below the domain width 0.5, got {gap}");
    }
    let widened_profile = gapped_profile(gap)?;
    let widened = pipeline_risks(&widened_profile, alpha, beta)?;
    let widened_not_beneficial = widened.augmented_risk >= widened.unaugmented_risk - 1e-12;

    let all_pass = constraints.iter().all(|c| c.satisfied)
        && construction.unaugmented_predicts_zero
        && construction.augmented_stage_positive
        && construction.pipeline_positive
        && augmentation_beneficial
        && widened_not_beneficial;

    Ok(OneDimVerdict {
        omega,
        alpha,
        beta,
        constraints,
        construction,
        augmentation_beneficial,
        widened,
        widened_not_beneficial,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasible_point_passes_with_the_published_risks() {
        let v = verify_1d_construction(0.23, 0.1, 0.93, None).unwrap();
        assert!(v.all_pass, "failed: {:?}", v.failed_conditions());
        assert!((v.construction.unaugmented_risk - 0.92).abs() < 1e-9);
        assert!((v.construction.augmented_risk - 0.08).abs() < 1e-9);
        assert!((v.construction.gap - 0.04).abs() < 1e-12);
        assert!(v.widened.augmented_risk >= v.widened.unaugmented_risk - 1e-12);
    }

    #[test]
    fn too_small_beta_fails_its_constraint() {
        let v = verify_1d_construction(0.23, 0.1, 0.5, None).unwrap();
        assert!(!v.all_pass);
        let c = &v.constraints[0];
        assert_eq!(c.name, "beta >= 4 omega");
        assert!(!c.satisfied);
    }

    #[test]
    fn invalid_omega_is_rejected() {
        assert!(verify_1d_construction(0.3, 0.1, 0.93, None).is_err());
        assert!(verify_1d_construction(0.0, 0.1, 0.93, None).is_err());
    }

    #[test]
    fn widened_gap_override_is_validated() {
        assert!(verify_1d_construction(0.23, 0.1, 0.93, Some(0.04)).is_err());
        let v = verify_1d_construction(0.23, 0.1, 0.93, Some(0.08)).unwrap();
        assert!((v.widened.gap - 0.08).abs() < 1e-12);
        assert!(v.widened_not_beneficial);
    }
}
