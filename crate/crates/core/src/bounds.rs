//! The universal excess-risk upper bound over partition summaries, the
//! eta-inexact shrinkage radii, the two-sided excess-risk bounds for
//! imperfectly learned classifiers, and the disagreement-mass bound for
//! arbitrary approximations.

use serde::{Deserialize, Serialize};

use crate::classifiers::{soft_convolve, BallUnionConditional, Conditional};
use crate::error::{Error, Result};
use crate::geometry::Ball;
use crate::noise::{norm_inverse_opt, sqrt_sqnorm_quantile_opt, NoiseModel};
use crate::numeric::mix_seed;
use crate::risk::{risk, DataMeasure};
use crate::smoothing::EvalMode;

/// One partition's summary: its sign, the center of a ball certified to lie
/// inside the confidence-margin subset, and that ball's radius (the inradius
/// choice). For ball-union conditionals the natural choice is the partition
/// ball itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionBall {
    pub positive: bool,
    pub center: Vec<f64>,
    pub inradius: f64,
}

/// Partition summaries feeding the universal upper bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionSummary {
    pub parts: Vec<PartitionBall>,
    pub tau: f64,
    pub dim: usize,
}

impl PartitionSummary {
    pub fn new(parts: Vec<PartitionBall>, tau: f64, dim: usize) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidParameter(
                "need at least one partition".into(),
            ));
        }
        if !(0.0..=0.5).contains(&tau) {
            return Err(Error::InvalidParameter(format!(
                "tau must lie in [0, 0.5], got {tau}"
            )));
        }
        if parts
            .iter()
            .any(|p| p.center.len() != dim || p.inradius.is_nan() || p.inradius < 0.0)
        {
            return Err(Error::InvalidParameter(
                "partition centers must match dim and inradii be nonnegative".into(),
            ));
        }
        Ok(Self { parts, tau, dim })
    }

    /// The positive partitions of a ball-union conditional, with the balls
    /// themselves as inradius balls.
    pub fn from_ball_union(c: &BallUnionConditional) -> Self {
        Self {
            parts: c
                .balls()
                .iter()
                .map(|b| PartitionBall {
                    positive: true,
                    center: b.center.clone(),
                    inradius: b.radius,
                })
                .collect(),
            tau: c.tau(),
            dim: c.dim(),
        }
    }
}

/// Per-partition bound bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub positive: bool,
    /// r^k_alpha = sqrt(Psi_alpha^{-1}(0.5 / (0.5 ± tau))); infinite when the
    /// level is infeasible.
    pub alpha_radius: f64,
    /// r^k_{alpha,beta} = r^k_alpha + sqrt(Psi_beta^{-1}(0.5)).
    pub alpha_beta_radius: f64,
    /// (inradius − r^k_{alpha,beta})_+.
    pub shrunk_inradius: f64,
    /// True when the partition contributes nothing to the bound.
    pub clipped: bool,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_value: f64,
    pub entries: Vec<BoundEntry>,
    /// Whether every region mass came from a closed form.
    pub exact_masses: bool,
}

/// The universal upper bound on the excess risk:
/// 1 − Σ_k p_X(B(x̂^k, (ω^k − r^k_{α,β})_+)).
///
/// Positive partitions shrink at level 0.5/(0.5 + τ) and negative ones at
/// 0.5/(0.5 − τ); an infeasible level (possible for negative partitions with
/// τ > 0, or for the Gaussian family at level 1) clips the partition to a
/// zero contribution.
pub fn main_upper_bound(
    parts: &PartitionSummary,
    px: &DataMeasure,
    alpha_model: Option<&NoiseModel>,
    beta_model: Option<&NoiseModel>,
) -> Result<BoundReport> {
    if px.dim() != parts.dim {
        return Err(Error::DimensionMismatch {
            expected: parts.dim,
            got: px.dim(),
        });
    }
    let beta_term = sqrt_sqnorm_quantile_opt(beta_model, 0.5)?;
    let mut entries = Vec::with_capacity(parts.parts.len());
    let mut covered = 0.0;
    let mut exact_masses = true;
    for p in &parts.parts {
        let level = if p.positive {
            0.5 / (0.5 + parts.tau)
        } else {
            0.5 / (0.5 - parts.tau)
        };
        let alpha_radius = if level.is_finite() && level <= 1.0 {
            sqrt_sqnorm_quantile_opt(alpha_model, level)?
        } else {
            f64::INFINITY
        };
        let alpha_beta_radius = alpha_radius + beta_term;
        let shrunk = (p.inradius - alpha_beta_radius).max(0.0);
        let mut entry = BoundEntry {
            positive: p.positive,
            alpha_radius,
            alpha_beta_radius,
            shrunk_inradius: shrunk,
            clipped: shrunk == 0.0,
            mass: 0.0,
        };
        if shrunk > 0.0 {
            let m = px.ball_mass(&Ball {
                center: p.center.clone(),
                radius: shrunk,
            })?;
            entry.mass = m.value;
            exact_masses &= m.exact;
            covered += m.value;
        }
        entries.push(entry);
    }
    Ok(BoundReport {
        bound_value: (1.0 - covered).max(0.0),
        entries,
        exact_masses,
    })
}

/// Shrinkage radii for an eta-inexact classifier, per ball:
/// r^{+η}_α = A_{α,r}((0.5 + η)/(0.5 + τ)) and
/// r^{−η}_α = A_{α,r}((0.5 − η)/(0.5 + τ)); always r^{+η} <= r_{j,α} <= r^{−η}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaRadii {
    pub plus: f64,
    pub plus_vanished: bool,
    pub minus: f64,
    pub minus_vanished: bool,
}

pub fn eta_shrinkage_radii(
    c: &BallUnionConditional,
    alpha_model: Option<&NoiseModel>,
    eta: f64,
) -> Result<Vec<EtaRadii>> {
    if !(0.0..0.5).contains(&eta) {
        return Err(Error::InvalidParameter(format!(
            "eta must lie in [0, 0.5), got {eta}"
        )));
    }
    let plus_level = (0.5 + eta) / (0.5 + c.tau());
    let minus_level = (0.5 - eta) / (0.5 + c.tau());
    c.balls()
        .iter()
        .map(|b| {
            let plus = if plus_level > 1.0 {
                // eta above tau: even the exact conditional cannot clear the
                // raised threshold anywhere.
                None
            } else {
                radius_or_vanished(alpha_model, b.radius, plus_level)?
            };
            let minus = radius_or_vanished(alpha_model, b.radius, minus_level)?;
            Ok(EtaRadii {
                plus: plus.unwrap_or(0.0),
                plus_vanished: plus.is_none(),
                minus: minus.unwrap_or(0.0),
                minus_vanished: minus.is_none(),
            })
        })
        .collect()
}

fn radius_or_vanished(model: Option<&NoiseModel>, r: f64, level: f64) -> Result<Option<f64>> {
    match norm_inverse_opt(model, r, level) {
        Ok(v) => Ok(Some(v)),
        Err(Error::PartitionVanishes { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Which side of the dilation threshold an inexact pipeline landed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InexactCase {
    /// Every smoothed region stays inside its original partition.
    Contracted,
    /// Some smoothed region may dilate beyond its partition.
    Dilated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InexactBounds {
    pub lower: f64,
    pub upper: f64,
    pub case: InexactCase,
    pub base_risk: f64,
    pub exact_masses: bool,
}

/// Two-sided bounds on the excess risk achievable by any classifier g with
/// ‖g − h ∗ p_α‖_∞ <= η, in the separation regime ζ > 2·max(α, β).
pub fn inexact_risk_bounds(
    c: &BallUnionConditional,
    px: &DataMeasure,
    alpha_model: Option<&NoiseModel>,
    beta_model: Option<&NoiseModel>,
    eta: f64,
) -> Result<InexactBounds> {
    let max_scale = alpha_model
        .map(|m| m.scale())
        .unwrap_or(0.0)
        .max(beta_model.map(|m| m.scale()).unwrap_or(0.0));
    if let Ok(gap) = c.lower_interference_distance() {
        if gap <= 2.0 * max_scale {
            return Err(Error::Unsupported(format!(
                "separation regime violated: interference distance {gap} <= 2 * max scale {max_scale}"
            )));
        }
    }
    let tau = c.tau();
    let eta_radii = eta_shrinkage_radii(c, alpha_model, eta)?;

    // Smooth each eta-shrunk radius through the beta stage at level 0.5.
    let mut plus_balls = Vec::new();
    let mut minus_balls = Vec::new();
    let mut dilated = false;
    for (b, er) in c.balls().iter().zip(&eta_radii) {
        if !er.plus_vanished {
            if let Some(r) = radius_or_vanished(beta_model, er.plus, 0.5)? {
                if r > 0.0 {
                    plus_balls.push(Ball {
                        center: b.center.clone(),
                        radius: r,
                    });
                }
            }
        }
        if !er.minus_vanished {
            if let Some(r) = radius_or_vanished(beta_model, er.minus, 0.5)? {
                if r > b.radius {
                    dilated = true;
                }
                if r > 0.0 {
                    minus_balls.push(Ball {
                        center: b.center.clone(),
                        radius: r,
                    });
                }
            }
        }
    }

    let p_i = px.ball_union_mass(c.balls())?;
    let p_plus = px.ball_union_mass(&plus_balls)?;
    let p_minus = px.ball_union_mass(&minus_balls)?;
    let base = risk(
        &Conditional::BallUnion(c.clone()).threshold(),
        &Conditional::BallUnion(c.clone()),
        px,
        EvalMode::Exact,
        0,
        0,
    )?;

    let exact_masses = p_i.exact && p_plus.exact && p_minus.exact;
    let report = if !dilated {
        InexactBounds {
            lower: (0.5 + tau) * p_i.value - 2.0 * tau * p_minus.value - base.value,
            upper: (0.5 + tau) * p_i.value - 2.0 * tau * p_plus.value - base.value,
            case: InexactCase::Contracted,
            base_risk: base.value,
            exact_masses,
        }
    } else {
        // Mass of the dilated annuli I^{-eta} \ I, per concentric ball.
        let mut annulus = 0.0;
        let mut exact_ann = true;
        for (b, mb) in c.balls().iter().zip(&minus_balls) {
            if mb.radius > b.radius {
                let outer = px.ball_mass(mb)?;
                let inner = px.ball_mass(b)?;
                annulus += (outer.value - inner.value).max(0.0);
                exact_ann &= outer.exact && inner.exact;
            }
        }
        InexactBounds {
            lower: (0.5 - tau) * p_i.value - base.value,
            upper: (0.5 + tau) * p_i.value - 2.0 * tau * p_plus.value + annulus - base.value,
            case: InexactCase::Dilated,
            base_risk: base.value,
            exact_masses: exact_masses && exact_ann,
        }
    };
    Ok(report)
}

/// Equality tolerance when deciding whether two conditional values disagree.
pub const DISAGREEMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralBound {
    pub bound: f64,
    pub disagreement_mass: f64,
    pub n: usize,
}

/// Δ(g, h) <= delta_h + p_X((h ∗ p_α)(X) != g(X)): the disagreement mass is
/// estimated by seeded sampling of the data measure, comparing values with an
/// equality tolerance of [`DISAGREEMENT_TOL`].
pub fn general_g_bound(
    h: &Conditional,
    g: impl Fn(&[f64]) -> f64 + Sync,
    px: &DataMeasure,
    alpha_model: Option<&NoiseModel>,
    delta_h: f64,
    mc_samples: usize,
    seed: u64,
) -> Result<GeneralBound> {
    let soft = soft_convolve(h, alpha_model)?;
    let n = mc_samples.max(1);
    let points = px.sample_n(mix_seed(seed, &[0x6762]), n);
    let disagree = points
        .iter()
        .filter(|x| (soft.eval(x) - g(x)).abs() > DISAGREEMENT_TOL)
        .count();
    let mass = disagree as f64 / n as f64;
    Ok(GeneralBound {
        bound: delta_h + mass,
        disagreement_mass: mass,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::PerturbedClassifier;
    use crate::geometry::BoxDomain;
    use crate::noise::NoiseFamily;
    use crate::risk::closed_form_excess;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ball(center: Vec<f64>, r: f64) -> Ball {
        Ball::new(center, r).unwrap()
    }

    #[test]
    fn bound_is_zero_when_inradius_balls_tile_the_domain() {
        // 1D: positive ball [0, 0.5], negative ball [0.5, 1], no shrinkage.
        let parts = PartitionSummary::new(
            vec![
                PartitionBall {
                    positive: true,
                    center: vec![0.25],
                    inradius: 0.25,
                },
                PartitionBall {
                    positive: false,
                    center: vec![0.75],
                    inradius: 0.25,
                },
            ],
            0.0,
            1,
        )
        .unwrap();
        let px = DataMeasure::UniformBox(BoxDomain::new(vec![0.0], vec![1.0]).unwrap());
        let rep = main_upper_bound(&parts, &px, None, None).unwrap();
        assert!(rep.bound_value.abs() < 1e-12, "got {}", rep.bound_value);
        assert!(rep.exact_masses);
    }

    #[test]
    fn positive_partition_alpha_radius_formula_uniform_2d() {
        let parts = PartitionSummary::new(
            vec![PartitionBall {
                positive: true,
                center: vec![5.0, 5.0],
                inradius: 3.0,
            }],
            0.1,
            2,
        )
        .unwrap();
        let px = DataMeasure::UniformBox(BoxDomain::new(vec![0.0, 0.0], vec![10.0, 10.0]).unwrap());
        let alpha = 0.8;
        let am = NoiseModel::new(NoiseFamily::UniformBall, alpha, 2).unwrap();
        let rep = main_upper_bound(&parts, &px, Some(&am), None).unwrap();
        // Psi^{-1}(c) = alpha^2 c^{2/d}, so r_alpha = alpha * c^{1/2} in 2D.
        let want = alpha * (0.5f64 / 0.6).sqrt();
        assert!((rep.entries[0].alpha_radius - want).abs() < 1e-12);
        assert!((rep.entries[0].alpha_beta_radius - want).abs() < 1e-12);
    }

    #[test]
    fn negative_partitions_clip_for_positive_tau() {
        let parts = PartitionSummary::new(
            vec![PartitionBall {
                positive: false,
                center: vec![0.5],
                inradius: 0.4,
            }],
            0.2,
            1,
        )
        .unwrap();
        let px = DataMeasure::UniformBox(BoxDomain::new(vec![0.0], vec![1.0]).unwrap());
        let am = NoiseModel::new(NoiseFamily::UniformBall, 0.1, 1).unwrap();
        let rep = main_upper_bound(&parts, &px, Some(&am), None).unwrap();
        assert!(rep.entries[0].clipped);
        assert_eq!(rep.bound_value, 1.0);
    }

    #[test]
    fn bound_monotone_in_alpha_and_beta() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let parts = PartitionSummary::new(
                vec![
                    PartitionBall {
                        positive: true,
                        center: vec![rng.random_range(20.0..40.0), rng.random_range(20.0..40.0)],
                        inradius: rng.random_range(5.0..12.0),
                    },
                    PartitionBall {
                        positive: true,
                        center: vec![rng.random_range(60.0..80.0), rng.random_range(60.0..80.0)],
                        inradius: rng.random_range(5.0..12.0),
                    },
                ],
                rng.random_range(0.05..0.45),
                2,
            )
            .unwrap();
            let px = DataMeasure::UniformBox(
                BoxDomain::new(vec![0.0, 0.0], vec![100.0, 100.0]).unwrap(),
            );
            let grid = [0.0, 0.7, 1.5, 3.0];
            for family in [NoiseFamily::UniformBall, NoiseFamily::GaussianIso] {
                let mut by_alpha = Vec::new();
                for &a in &grid {
                    let am = NoiseModel::maybe(family, a, 2).unwrap();
                    let bm = NoiseModel::maybe(family, 1.0, 2).unwrap();
                    by_alpha.push(
                        main_upper_bound(&parts, &px, am.as_ref(), bm.as_ref())
                            .unwrap()
                            .bound_value,
                    );
                }
                for w in by_alpha.windows(2) {
                    assert!(
                        w[1] >= w[0] - 1e-12,
                        "{family:?} alpha monotonicity: {by_alpha:?}"
                    );
                }
                let mut by_beta = Vec::new();
                for &b in &grid {
                    let am = NoiseModel::maybe(family, 1.0, 2).unwrap();
                    let bm = NoiseModel::maybe(family, b, 2).unwrap();
                    by_beta.push(
                        main_upper_bound(&parts, &px, am.as_ref(), bm.as_ref())
                            .unwrap()
                            .bound_value,
                    );
                }
                for w in by_beta.windows(2) {
                    assert!(
                        w[1] >= w[0] - 1e-12,
                        "{family:?} beta monotonicity: {by_beta:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn eta_radii_reduce_to_plain_shrinkage_at_zero() {
        let c = BallUnionConditional::new(
            vec![ball(vec![0.0, 0.0], 1.0), ball(vec![8.0, 0.0], 1.5)],
            0.2,
        )
        .unwrap();
        let am = NoiseModel::new(NoiseFamily::UniformBall, 0.4, 2).unwrap();
        let radii = eta_shrinkage_radii(&c, Some(&am), 0.0).unwrap();
        let rep = crate::smoothing::alpha_shrinkage(&c, Some(&am)).unwrap();
        for (er, e) in radii.iter().zip(&rep.entries) {
            assert!((er.plus - e.alpha_radius).abs() < 1e-10);
            assert!((er.minus - e.alpha_radius).abs() < 1e-10);
        }
    }

    #[test]
    fn eta_radii_interval_algebra_case() {
        // d=1, r=1, alpha=0.2, tau=0.1, eta=0.05.
        let c = BallUnionConditional::new(vec![ball(vec![0.0], 1.0)], 0.1).unwrap();
        let am = NoiseModel::new(NoiseFamily::UniformBall, 0.2, 1).unwrap();
        let radii = eta_shrinkage_radii(&c, Some(&am), 0.05).unwrap();
        let plus_want = 1.2 - 0.4 * (0.55 / 0.6);
        let minus_want = 1.2 - 0.4 * (0.45 / 0.6);
        assert!(
            (radii[0].plus - plus_want).abs() < 1e-9,
            "{}",
            radii[0].plus
        );
        assert!(
            (radii[0].minus - minus_want).abs() < 1e-9,
            "{}",
            radii[0].minus
        );
    }

    #[test]
    fn eta_radii_ordering_on_random_configs() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let tau: f64 = rng.random_range(0.05..0.45);
            let eta = rng.random_range(0.0..tau.min(0.3));
            let r = rng.random_range(0.5..2.0);
            let c = BallUnionConditional::new(vec![ball(vec![0.0, 0.0], r)], tau).unwrap();
            let am =
                NoiseModel::new(NoiseFamily::UniformBall, rng.random_range(0.05..0.5), 2).unwrap();
            let radii = eta_shrinkage_radii(&c, Some(&am), eta).unwrap();
            let rep = crate::smoothing::alpha_shrinkage(&c, Some(&am)).unwrap();
            assert!(radii[0].plus <= rep.entries[0].alpha_radius + 1e-10);
            assert!(rep.entries[0].alpha_radius <= radii[0].minus + 1e-10);
        }
    }

    #[test]
    fn inexact_bounds_degenerate_to_closed_form_at_eta_zero() {
        let c = BallUnionConditional::new(vec![ball(vec![-5.0], 1.0), ball(vec![5.0], 1.0)], 0.1)
            .unwrap();
        let px = DataMeasure::UniformBox(BoxDomain::new(vec![-10.0], vec![10.0]).unwrap());
        let am = NoiseModel::new(NoiseFamily::UniformBall, 0.2, 1).unwrap();
        let bm = NoiseModel::new(NoiseFamily::UniformBall, 0.2, 1).unwrap();
        let b = inexact_risk_bounds(&c, &px, Some(&am), Some(&bm), 0.0).unwrap();
        let cf = closed_form_excess(&c, &px, Some(&am), Some(&bm)).unwrap();
        assert_eq!(b.case, InexactCase::Contracted);
        assert!((b.lower - cf.value).abs() < 1e-9);
        assert!((b.upper - cf.value).abs() < 1e-9);
    }

    #[test]
    fn dilated_case_lower_bound_is_bayes_baseline() {
        // eta > 0.25 - 0.5 tau forces dilation in 1D.
        let c = BallUnionConditional::new(vec![ball(vec![-5.0], 1.0), ball(vec![5.0], 1.0)], 0.1)
            .unwrap();
        let px = DataMeasure::UniformBox(BoxDomain::new(vec![-10.0], vec![10.0]).unwrap());
        let am = NoiseModel::new(NoiseFamily::UniformBall, 0.2, 1).unwrap();
        let bm = NoiseModel::new(NoiseFamily::UniformBall, 0.2, 1).unwrap();
        let b = inexact_risk_bounds(&c, &px, Some(&am), Some(&bm), 0.3).unwrap();
        assert_eq!(b.case, InexactCase::Dilated);
        assert!(b.lower.abs() < 1e-12, "lower bound {}", b.lower);
        assert!(b.upper >= b.lower);
    }

    #[test]
    fn inexact_bounds_reject_regime_violation() {
        let c = BallUnionConditional::new(vec![ball(vec![-1.2], 1.0), ball(vec![1.2], 1.0)], 0.1)
            .unwrap();
        let px = DataMeasure::UniformBox(BoxDomain::new(vec![-10.0], vec![10.0]).unwrap());
        let am = NoiseModel::new(NoiseFamily::UniformBall, 0.5, 1).unwrap();
        assert!(matches!(
            inexact_risk_bounds(&c, &px, Some(&am), None, 0.05),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn general_bound_trivial_disagreement_masses() {
        let hc = BallUnionConditional::new(vec![ball(vec![0.0, 0.0], 2.0)], 0.2).unwrap();
        let h = Conditional::BallUnion(hc);
        let px = DataMeasure::UniformBox(BoxDomain::new(vec![-4.0, -4.0], vec![4.0, 4.0]).unwrap());
        let am = NoiseModel::new(NoiseFamily::UniformBall, 0.5, 2).unwrap();
        let soft = soft_convolve(&h, Some(&am)).unwrap();

        // g identical to h * p_alpha: zero disagreement.
        let same = general_g_bound(&h, |x| soft.eval(x), &px, Some(&am), 0.25, 20_000, 4).unwrap();
        assert_eq!(same.disagreement_mass, 0.0);
        assert_eq!(same.bound, 0.25);

        // g shifted by a constant: disagreement everywhere.
        let off = general_g_bound(
            &h,
            |x| (soft.eval(x) + 0.05).clamp(0.0, 1.0),
            &px,
            Some(&am),
            0.25,
            20_000,
            4,
        )
        .unwrap();
        assert_eq!(off.disagreement_mass, 1.0);
        assert!((off.bound - 1.25).abs() < 1e-12);
    }

    #[test]
    fn general_bound_holds_for_seeded_bump_perturbation() {
        let hc = BallUnionConditional::new(vec![ball(vec![-5.0], 1.0), ball(vec![5.0], 1.0)], 0.2)
            .unwrap();
        let h = Conditional::BallUnion(hc.clone());
        let px = DataMeasure::UniformBox(BoxDomain::new(vec![-10.0], vec![10.0]).unwrap());
        let am = NoiseModel::new(NoiseFamily::UniformBall, 0.3, 1).unwrap();
        let bm = NoiseModel::new(NoiseFamily::UniformBall, 0.3, 1).unwrap();
        let soft = soft_convolve(&h, Some(&am)).unwrap();
        let domain = BoxDomain::new(vec![-10.0], vec![10.0]).unwrap();
        let g = PerturbedClassifier::new(soft, 0.05, &domain, 5, 99).unwrap();

        let cf = closed_form_excess(&hc, &px, Some(&am), Some(&bm)).unwrap();
        let gb = general_g_bound(&h, |x| g.eval(x), &px, Some(&am), cf.value, 20_000, 4).unwrap();
        assert!(gb.bound >= cf.value);
        assert!(gb.disagreement_mass <= 1.0);
    }
}
