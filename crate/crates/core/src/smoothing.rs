//! The randomized-smoothing operator, the two-stage pipeline
//! Smooth_beta(ψ(h ∗ p_alpha)), shrinkage-radius computations, and the
//! Gaussian certified radius.

use serde::{Deserialize, Serialize};

use crate::classifiers::{
    psi, soft_convolve, vote_mc, BallUnionConditional, Conditional, HardClassifier,
};
use crate::error::{Error, Result};
use crate::geometry::Ball;
use crate::noise::{norm_inverse_opt, NoiseFamily, NoiseModel};
use crate::numeric::{clopper_pearson, normal_quantile, seed_from_point};

/// Evaluation contract for pipeline operations: `Exact` fails when no
/// closed-form route exists, `MonteCarlo` permits seeded sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvalMode {
    Exact,
    MonteCarlo,
}

impl EvalMode {
    pub fn label(&self) -> &'static str {
        match self {
            EvalMode::Exact => "exact",
            EvalMode::MonteCarlo => "mc",
        }
    }
}

/// Configuration for the two-stage pipeline: augmentation scale `alpha`,
/// smoothing scale `beta` (zero disables a stage), the shared noise family,
/// evaluation mode, Monte-Carlo vote budget, and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothingConfig {
    pub family: NoiseFamily,
    pub alpha: f64,
    pub beta: f64,
    pub mode: EvalMode,
    pub mc_samples: usize,
    pub seed: u64,
}

impl SmoothingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.alpha.is_nan() || self.alpha < 0.0 || self.beta.is_nan() || self.beta < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "alpha and beta must be nonnegative, got {} and {}",
                self.alpha, self.beta
            )));
        }
        if self.mode == EvalMode::MonteCarlo && self.mc_samples == 0 {
            return Err(Error::InvalidParameter(
                "mc_samples must be >= 1 in Monte-Carlo mode".into(),
            ));
        }
        Ok(())
    }
}

/// A smoothed vote at one point: the vote probability s, the label ψ(s), and
/// a Clopper–Pearson 99% interval in Monte-Carlo mode (zero-width when exact).
#[derive(Debug, Clone, PartialEq)]
pub struct Vote {
    pub prob: f64,
    pub label: bool,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n: usize,
    pub mode: EvalMode,
}

/// Vote probability and label of Smooth_noise(f) at `x`.
///
/// Exact when `f` is a ball-union or interval indicator (or constant);
/// otherwise Monte Carlo with the configured budget, using a seed derived
/// from the point so concurrent evaluation cannot reorder results.
pub fn smooth_hard(
    f: &HardClassifier,
    noise: &NoiseModel,
    x: &[f64],
    cfg: &SmoothingConfig,
) -> Result<Vote> {
    cfg.validate()?;
    if let Some(d) = f.dim() {
        if d != noise.dim() || d != x.len() {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: x.len(),
            });
        }
    }
    if let Some(s) = f.vote_exact(noise, x) {
        return Ok(Vote {
            prob: s,
            label: psi(s),
            ci_low: s,
            ci_high: s,
            n: 0,
            mode: EvalMode::Exact,
        });
    }
    if cfg.mode == EvalMode::Exact {
        return Err(Error::ExactUnsupported(
            "exact smoothing requires a ball-union or interval indicator".into(),
        ));
    }
    let (hits, n) = vote_mc(f, noise, x, cfg.mc_samples, seed_from_point(cfg.seed, x));
    let s = hits as f64 / n as f64;
    let (lo, hi) = clopper_pearson(hits, n as u64, 0.99);
    Ok(Vote {
        prob: s,
        label: psi(s),
        ci_low: lo,
        ci_high: hi,
        n,
        mode: EvalMode::MonteCarlo,
    })
}

/// Builds the two-stage classifier ψ((ψ(h ∗ p_alpha)) ∗ p_beta).
///
/// alpha = 0 reduces to Smooth_beta(ψ(h)); beta = 0 reduces to ψ(h ∗ p_alpha).
/// The result is fully region-exact when each stage admits it (1D, or
/// uniform-ball noise with partitions separated beyond the noise scale);
/// otherwise the smoothing stage evaluates pointwise, exactly where the
/// stage-1 region is a ball union and by seeded votes elsewhere.
pub fn two_stage(h: &Conditional, cfg: &SmoothingConfig) -> Result<HardClassifier> {
    cfg.validate()?;
    let dim = h.dim();
    let alpha_model = NoiseModel::maybe(cfg.family, cfg.alpha, dim)?;
    let beta_model = NoiseModel::maybe(cfg.family, cfg.beta, dim)?;

    let stage1 = soft_convolve(h, alpha_model.as_ref())?.threshold();
    let Some(beta) = beta_model else {
        return Ok(stage1);
    };

    let smoothed = match &stage1 {
        HardClassifier::Const(_) => stage1.clone(),
        HardClassifier::Intervals(iv) => {
            if iv.measure() == 0.0 {
                // Empty up to a null set; smoothing sees no mass.
                HardClassifier::Const(false)
            } else {
                let ind = crate::piecewise::PiecewiseConstant::indicator(iv)?;
                HardClassifier::Intervals(ind.positive_region(Some(&beta), 0.5))
            }
        }
        HardClassifier::Balls { balls, dim } => {
            let separated = match crate::geometry::min_surface_distance(balls) {
                Some(gap) => gap > beta.scale(),
                None => true,
            };
            if cfg.family == NoiseFamily::UniformBall && separated {
                let mut shrunk = Vec::new();
                for b in balls {
                    if let Ok(r) = beta.norm_inverse(b.radius, 0.5) {
                        if r > 0.0 {
                            shrunk.push(Ball {
                                center: b.center.clone(),
                                radius: r,
                            });
                        }
                    }
                }
                if shrunk.is_empty() {
                    HardClassifier::Const(false)
                } else {
                    HardClassifier::Balls {
                        balls: shrunk,
                        dim: *dim,
                    }
                }
            } else {
                HardClassifier::SmoothedBalls {
                    balls: balls.clone(),
                    noise: beta,
                }
            }
        }
        other => HardClassifier::McSmoothed {
            base: Box::new(other.clone()),
            noise: beta,
            samples: cfg.mc_samples,
            seed: cfg.seed,
        },
    };

    if cfg.mode == EvalMode::Exact && !is_region_exact(&smoothed) {
        return Err(Error::ExactUnsupported(
            "two-stage pipeline has no exact region in this configuration".into(),
        ));
    }
    Ok(smoothed)
}

/// Whether the classifier's decision region is represented exactly.
pub fn is_region_exact(f: &HardClassifier) -> bool {
    matches!(
        f,
        HardClassifier::Const(_) | HardClassifier::Balls { .. } | HardClassifier::Intervals(_)
    )
}

/// Certified radius report. `abstain` marks votes at or below one half;
/// `infinite` marks a unanimous vote, where the Gaussian certificate is
/// unbounded (the radius field carries infinity).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub radius: f64,
    pub abstain: bool,
    pub infinite: bool,
}

/// Gaussian certified radius beta * Phi^{-1}(s).
///
/// Only the Gaussian family carries this certificate; requesting it for the
/// uniform ball is an unsupported-operation error.
pub fn certified_radius(s: f64, family: NoiseFamily, beta: f64) -> Result<Certificate> {
    if family != NoiseFamily::GaussianIso {
        return Err(Error::Unsupported(
            "certified radius is defined for Gaussian smoothing only".into(),
        ));
    }
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "beta must be positive, got {beta}"
        )));
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParameter(format!(
            "vote probability must be in [0, 1], got {s}"
        )));
    }
    if s <= 0.5 {
        return Ok(Certificate {
            radius: 0.0,
            abstain: true,
            infinite: false,
        });
    }
    if s == 1.0 {
        return Ok(Certificate {
            radius: f64::INFINITY,
            abstain: false,
            infinite: true,
        });
    }
    Ok(Certificate {
        radius: beta * normal_quantile(s),
        abstain: false,
        infinite: false,
    })
}

/// Per-ball shrinkage radii through the two pipeline stages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShrinkageEntry {
    /// Original partition radius r_j.
    pub original: f64,
    /// Radius after augmentation, r_{j,alpha}; zero when vanished.
    pub alpha_radius: f64,
    pub alpha_vanished: bool,
    /// Radius after augmentation plus smoothing, r_{j,alpha,beta};
    /// `None` until the second stage has been applied.
    pub alpha_beta_radius: Option<f64>,
    pub alpha_beta_vanished: bool,
}

/// Shrinkage pipeline report for a ball-union conditional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShrinkageReport {
    pub tau: f64,
    pub entries: Vec<ShrinkageEntry>,
    /// Whether the separation assumption backing per-ball exactness held
    /// (lower interference distance above the stage scale).
    pub regime_ok: bool,
    pub centers: Vec<Vec<f64>>,
}

impl ShrinkageReport {
    /// Stage-1 balls B(c_j, r_{j,alpha}) that did not vanish.
    pub fn alpha_balls(&self) -> Vec<Ball> {
        self.entries
            .iter()
            .zip(&self.centers)
            .filter(|(e, _)| !e.alpha_vanished && e.alpha_radius > 0.0)
            .map(|(e, c)| Ball {
                center: c.clone(),
                radius: e.alpha_radius,
            })
            .collect()
    }

    /// Final balls B(c_j, r_{j,alpha,beta}) that did not vanish.
    pub fn alpha_beta_balls(&self) -> Vec<Ball> {
        self.entries
            .iter()
            .zip(&self.centers)
            .filter_map(|(e, c)| match e.alpha_beta_radius {
                Some(r) if !e.alpha_beta_vanished && r > 0.0 => Some(Ball {
                    center: c.clone(),
                    radius: r,
                }),
                _ => None,
            })
            .collect()
    }
}

/// Stage-1 shrinkage: r_{j,alpha} = A_{alpha, r_j}(0.5 / (0.5 + tau)).
///
/// `alpha_model = None` is the identity stage. Outside the separation regime
/// the radii are still well defined but only approximate the true positive
/// region; the report flags this through `regime_ok`.
pub fn alpha_shrinkage(
    c: &BallUnionConditional,
    alpha_model: Option<&NoiseModel>,
) -> Result<ShrinkageReport> {
    if let Some(m) = alpha_model {
        if m.dim() != c.dim() {
            return Err(Error::DimensionMismatch {
                expected: c.dim(),
                got: m.dim(),
            });
        }
    }
    let level = 0.5 / (0.5 + c.tau());
    let regime_ok = match (alpha_model, c.lower_interference_distance()) {
        (Some(m), Ok(gap)) => gap > m.scale(),
        _ => true,
    };
    let entries = c
        .balls()
        .iter()
        .map(|b| match norm_inverse_opt(alpha_model, b.radius, level) {
            Ok(r) => ShrinkageEntry {
                original: b.radius,
                alpha_radius: r,
                alpha_vanished: false,
                alpha_beta_radius: None,
                alpha_beta_vanished: false,
            },
            Err(Error::PartitionVanishes { .. }) => ShrinkageEntry {
                original: b.radius,
                alpha_radius: 0.0,
                alpha_vanished: true,
                alpha_beta_radius: Some(0.0),
                alpha_beta_vanished: true,
            },
            Err(e) => panic!("norm inverse failed unexpectedly: {e}"),
        })
        .collect();
    Ok(ShrinkageReport {
        tau: c.tau(),
        entries,
        regime_ok,
        centers: c.balls().iter().map(|b| b.center.clone()).collect(),
    })
}

/// Stage-2 shrinkage: r_{j,alpha,beta} = A_{beta, r_{j,alpha}}(0.5).
/// A partition vanishes when less than half of the smoothing mass at its
/// center lands inside the stage-1 ball.
pub fn beta_shrinkage(
    report: &ShrinkageReport,
    beta_model: Option<&NoiseModel>,
) -> Result<ShrinkageReport> {
    let mut out = report.clone();
    for e in &mut out.entries {
        if e.alpha_vanished {
            e.alpha_beta_radius = Some(0.0);
            e.alpha_beta_vanished = true;
            continue;
        }
        match norm_inverse_opt(beta_model, e.alpha_radius, 0.5) {
            Ok(r) => {
                e.alpha_beta_radius = Some(r);
                e.alpha_beta_vanished = false;
            }
            Err(Error::PartitionVanishes { .. }) => {
                e.alpha_beta_radius = Some(0.0);
                e.alpha_beta_vanished = true;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Ball;
    use crate::noise::NoiseFamily;

    fn ball(center: Vec<f64>, r: f64) -> Ball {
        Ball::new(center, r).unwrap()
    }

    fn cfg(family: NoiseFamily, alpha: f64, beta: f64) -> SmoothingConfig {
        SmoothingConfig {
            family,
            alpha,
            beta,
            mode: EvalMode::MonteCarlo,
            mc_samples: 2000,
            seed: 7,
        }
    }

    #[test]
    fn smooth_hard_constant_classifier() {
        let f = HardClassifier::Const(true);
        let m = NoiseModel::new(NoiseFamily::GaussianIso, 1.0, 2).unwrap();
        let v = smooth_hard(
            &f,
            &m,
            &[0.3, 0.4],
            &cfg(NoiseFamily::GaussianIso, 0.0, 1.0),
        )
        .unwrap();
        assert_eq!(v.prob, 1.0);
        assert!(v.label);
        assert_eq!(v.mode, EvalMode::Exact);
    }

    #[test]
    fn smooth_hard_interval_tie_labels_positive() {
        // Indicator of [-1, 1] under Unif[-0.4, 0.4] at x = 1: half the noise
        // window overlaps, the tie resolves to label 1.
        let f = HardClassifier::Intervals(crate::geometry::IntervalUnion::new(vec![(-1.0, 1.0)]));
        let m = NoiseModel::new(NoiseFamily::UniformBall, 0.4, 1).unwrap();
        let v = smooth_hard(&f, &m, &[1.0], &cfg(NoiseFamily::UniformBall, 0.0, 0.4)).unwrap();
        assert!((v.prob - 0.5).abs() < 1e-12);
        assert!(v.label);
    }

    #[test]
    fn smooth_hard_exact_matches_mc_within_cp_interval() {
        let f = HardClassifier::Balls {
            balls: vec![ball(vec![0.0, 0.0], 1.0)],
            dim: 2,
        };
        let m = NoiseModel::new(NoiseFamily::GaussianIso, 0.8, 2).unwrap();
        let exact = smooth_hard(
            &f,
            &m,
            &[0.6, 0.2],
            &cfg(NoiseFamily::GaussianIso, 0.0, 0.8),
        )
        .unwrap()
        .prob;
        let (hits, n) = vote_mc(&f, &m, &[0.6, 0.2], 100_000, 5);
        let (lo, hi) = clopper_pearson(hits, n as u64, 0.99);
        assert!(
            exact >= lo && exact <= hi,
            "exact {exact} not in [{lo}, {hi}]"
        );
    }

    #[test]
    fn smooth_hard_exact_mode_rejects_opaque_classifiers() {
        let h = Conditional::BallUnion(
            BallUnionConditional::new(vec![ball(vec![0.0], 1.0), ball(vec![2.5], 1.0)], 0.1)
                .unwrap(),
        );
        // Gap 0.5 < alpha scale 0.8: stage-1 region is not a ball union.
        let alpha = NoiseModel::new(NoiseFamily::UniformBall, 0.8, 1).unwrap();
        let soft = soft_convolve(&h, Some(&alpha)).unwrap();
        let f = soft.threshold();
        let m = NoiseModel::new(NoiseFamily::UniformBall, 0.4, 1).unwrap();
        let mut c = cfg(NoiseFamily::UniformBall, 0.8, 0.4);
        c.mode = EvalMode::Exact;
        assert!(matches!(
            smooth_hard(&f, &m, &[0.0], &c),
            Err(Error::ExactUnsupported(_))
        ));
    }

    #[test]
    fn two_stage_identity_when_both_scales_zero() {
        let h = Conditional::BallUnion(
            BallUnionConditional::new(vec![ball(vec![0.0, 0.0], 1.0)], 0.2).unwrap(),
        );
        let f = two_stage(&h, &cfg(NoiseFamily::UniformBall, 0.0, 0.0)).unwrap();
        for x in [[0.0, 0.0], [0.99, 0.0], [1.01, 0.0], [3.0, 3.0]] {
            assert_eq!(f.eval(&x), psi(h.eval(&x)), "{x:?}");
        }
    }

    #[test]
    fn two_stage_regime_equals_shrinkage_pipeline() {
        let bu = BallUnionConditional::new(
            vec![ball(vec![0.0, 0.0], 1.0), ball(vec![6.0, 0.0], 1.2)],
            0.15,
        )
        .unwrap();
        let h = Conditional::BallUnion(bu.clone());
        let c = cfg(NoiseFamily::UniformBall, 0.3, 0.4);
        let f = two_stage(&h, &c).unwrap();

        let am = NoiseModel::new(NoiseFamily::UniformBall, 0.3, 2).unwrap();
        let bm = NoiseModel::new(NoiseFamily::UniformBall, 0.4, 2).unwrap();
        let report = beta_shrinkage(&alpha_shrinkage(&bu, Some(&am)).unwrap(), Some(&bm)).unwrap();
        let expect = report.alpha_beta_balls();

        match &f {
            HardClassifier::Balls { balls, .. } => {
                assert_eq!(balls.len(), expect.len());
                for (a, b) in balls.iter().zip(&expect) {
                    assert!((a.radius - b.radius).abs() < 1e-9);
                }
            }
            other => panic!("expected balls, got {other:?}"),
        }

        // Dense boundary probing at radius +/- 1e-6 along several directions.
        for b in &expect {
            for k in 0..32 {
                let ang = 2.0 * std::f64::consts::PI * k as f64 / 32.0;
                let dir = [ang.cos(), ang.sin()];
                let inside = [
                    b.center[0] + (b.radius - 1e-6) * dir[0],
                    b.center[1] + (b.radius - 1e-6) * dir[1],
                ];
                let outside = [
                    b.center[0] + (b.radius + 1e-6) * dir[0],
                    b.center[1] + (b.radius + 1e-6) * dir[1],
                ];
                assert!(f.eval(&inside));
                assert!(!f.eval(&outside));
            }
        }
    }

    #[test]
    fn alpha_shrinkage_interval_algebra_cases() {
        // tau = 0.5, r = 1, alpha = 1: threshold met exactly at the boundary.
        let c = BallUnionConditional::new(vec![ball(vec![0.0], 1.0)], 0.5).unwrap();
        let m = NoiseModel::new(NoiseFamily::UniformBall, 1.0, 1).unwrap();
        let rep = alpha_shrinkage(&c, Some(&m)).unwrap();
        assert!((rep.entries[0].alpha_radius - 1.0).abs() < 1e-9);

        // tau = 0.1, r = 1, alpha = 0.2 -> 0.8667 (interval overlap algebra).
        let c = BallUnionConditional::new(vec![ball(vec![0.0], 1.0)], 0.1).unwrap();
        let m = NoiseModel::new(NoiseFamily::UniformBall, 0.2, 1).unwrap();
        let rep = alpha_shrinkage(&c, Some(&m)).unwrap();
        assert!((rep.entries[0].alpha_radius - (1.2 - 0.4 * (0.5 / 0.6))).abs() < 1e-9);

        // tau = 0.1, r = 1, alpha = 1 -> 1/3.
        let m = NoiseModel::new(NoiseFamily::UniformBall, 1.0, 1).unwrap();
        let rep = alpha_shrinkage(&c, Some(&m)).unwrap();
        assert!((rep.entries[0].alpha_radius - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn beta_shrinkage_identity_and_vanishing() {
        let c = BallUnionConditional::new(vec![ball(vec![0.0], 1.0)], 0.1).unwrap();
        let am = NoiseModel::new(NoiseFamily::UniformBall, 0.2, 1).unwrap();
        let rep = alpha_shrinkage(&c, Some(&am)).unwrap();

        // beta -> 0 keeps the stage-1 radius.
        let rep0 = beta_shrinkage(&rep, None).unwrap();
        assert!(
            (rep0.entries[0].alpha_beta_radius.unwrap() - rep.entries[0].alpha_radius).abs()
                < 1e-12
        );

        // 1D symmetric hard smoothing preserves the interval exactly.
        let bm = NoiseModel::new(NoiseFamily::UniformBall, 0.2, 1).unwrap();
        let rep1 = beta_shrinkage(&rep, Some(&bm)).unwrap();
        assert!(
            (rep1.entries[0].alpha_beta_radius.unwrap() - rep.entries[0].alpha_radius).abs() < 1e-9
        );

        // Center mass 1/3 < 0.5 under beta = 1: the partition vanishes.
        let am = NoiseModel::new(NoiseFamily::UniformBall, 1.0, 1).unwrap();
        let rep = alpha_shrinkage(&c, Some(&am)).unwrap();
        assert!((rep.entries[0].alpha_radius - 1.0 / 3.0).abs() < 1e-9);
        let bm = NoiseModel::new(NoiseFamily::UniformBall, 1.0, 1).unwrap();
        let rep2 = beta_shrinkage(&rep, Some(&bm)).unwrap();
        assert!(rep2.entries[0].alpha_beta_vanished);
        assert_eq!(rep2.entries[0].alpha_beta_radius, Some(0.0));
    }

    #[test]
    fn shrinkage_is_monotone_in_alpha() {
        let c = BallUnionConditional::new(vec![ball(vec![0.0, 0.0], 1.0)], 0.2).unwrap();
        let mut prev = f64::INFINITY;
        for alpha in [0.1, 0.3, 0.6, 0.9, 1.3, 2.0] {
            let m = NoiseModel::new(NoiseFamily::UniformBall, alpha, 2).unwrap();
            let rep = alpha_shrinkage(&c, Some(&m)).unwrap();
            let r = rep.entries[0].alpha_radius;
            assert!(r <= prev + 1e-12, "alpha={alpha}: {r} > {prev}");
            prev = r;
        }
    }

    #[test]
    fn shrinkage_radii_are_ordered() {
        let c = BallUnionConditional::new(
            vec![ball(vec![0.0, 0.0], 1.5), ball(vec![8.0, 0.0], 1.0)],
            0.3,
        )
        .unwrap();
        for family in [NoiseFamily::UniformBall, NoiseFamily::GaussianIso] {
            let am = NoiseModel::new(family, 0.4, 2).unwrap();
            let bm = NoiseModel::new(family, 0.5, 2).unwrap();
            let rep = beta_shrinkage(&alpha_shrinkage(&c, Some(&am)).unwrap(), Some(&bm)).unwrap();
            for e in &rep.entries {
                let rab = e.alpha_beta_radius.unwrap();
                assert!(rab <= e.alpha_radius + 1e-12);
                assert!(e.alpha_radius <= e.original + 1e-12);
                assert!(rab >= 0.0);
            }
        }
    }

    #[test]
    fn certificate_values_and_errors() {
        let c = certified_radius(0.5, NoiseFamily::GaussianIso, 1.0).unwrap();
        assert_eq!(c.radius, 0.0);
        assert!(c.abstain);

        let c = certified_radius(0.8413, NoiseFamily::GaussianIso, 1.0).unwrap();
        assert!((c.radius - 1.0).abs() < 1e-3, "got {}", c.radius);

        let c = certified_radius(0.9, NoiseFamily::GaussianIso, 0.5).unwrap();
        assert!((c.radius - 0.5 * normal_quantile(0.9)).abs() < 1e-12);
        assert!((c.radius - 0.6408).abs() < 1e-4);

        let c = certified_radius(1.0, NoiseFamily::GaussianIso, 2.0).unwrap();
        assert!(c.infinite && c.radius.is_infinite());

        assert!(matches!(
            certified_radius(0.9, NoiseFamily::UniformBall, 1.0),
            Err(Error::Unsupported(_))
        ));
        assert!(certified_radius(0.9, NoiseFamily::GaussianIso, 0.0).is_err());
    }
}
