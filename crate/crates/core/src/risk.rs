//! Benign risk R(f) = P(f(X) != Y), the excess risk of the two-stage
//! smoothed pipeline, the closed-form risk for ball-union conditionals, and
//! empirical estimates. Exact mode integrates region masses in closed form;
//! Monte-Carlo mode samples the data measure with seeded streams and reports
//! 99% normal-approximation intervals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::{BallUnionConditional, Conditional, HardClassifier};
use crate::error::{Error, Result};
use crate::geometry::{dist, sample_in_ball, Ball, BoxDomain, IntervalUnion};
use crate::noise::NoiseModel;
use crate::numeric::{balls_intersection_volume, mix_seed, normal_ci_z, overlap_len};
use crate::smoothing::{alpha_shrinkage, beta_shrinkage, two_stage, EvalMode, SmoothingConfig};

/// Tolerance for treating two ball centers as identical.
const CENTER_MATCH_TOL: f64 = 1e-9;
/// Sample count for Monte-Carlo mass fallbacks.
const MASS_MC_SAMPLES: usize = 200_000;
const MASS_MC_SEED: u64 = 0x6d61_7373;

/// A region a data measure can weight: a ball or an axis-aligned box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Region {
    Ball(Ball),
    Box(BoxDomain),
}

impl Region {
    pub fn dim(&self) -> usize {
        match self {
            Region::Ball(b) => b.dim(),
            Region::Box(b) => b.dim(),
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            Region::Ball(b) => b.volume(),
            Region::Box(b) => b.volume(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Region::Ball(b) => b.contains(x),
            Region::Box(b) => b.contains(x),
        }
    }
}

/// The marginal distribution of X: uniform on a box, or a weighted mixture of
/// uniform distributions over regions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DataMeasure {
    UniformBox(BoxDomain),
    Mixture {
        regions: Vec<Region>,
        weights: Vec<f64>,
    },
}

impl DataMeasure {
    /// Uniform distribution over the union of regions (weights proportional
    /// to region volumes; regions are assumed disjoint).
    pub fn uniform_on_regions(regions: Vec<Region>) -> Result<Self> {
        if regions.is_empty() {
            return Err(Error::InvalidParameter("need at least one region".into()));
        }
        let total: f64 = regions.iter().map(Region::volume).sum();
        let weights = regions.iter().map(|r| r.volume() / total).collect();
        Self::mixture(regions, weights)
    }

    pub fn mixture(regions: Vec<Region>, weights: Vec<f64>) -> Result<Self> {
        if regions.is_empty() || regions.len() != weights.len() {
            return Err(Error::InvalidParameter(
                "regions and weights must be nonempty and equal length".into(),
            ));
        }
        let dim = regions[0].dim();
        if regions.iter().any(|r| r.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: 0,
            });
        }
        if weights.iter().any(|w| *w < 0.0) {
            return Err(Error::InvalidParameter(
                "weights must be nonnegative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "weights must sum to 1, got {total}"
            )));
        }
        Ok(DataMeasure::Mixture { regions, weights })
    }

    pub fn dim(&self) -> usize {
        match self {
            DataMeasure::UniformBox(b) => b.dim(),
            DataMeasure::Mixture { regions, .. } => regions[0].dim(),
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        match self {
            DataMeasure::UniformBox(b) => b.sample(rng),
            DataMeasure::Mixture { regions, weights } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut pick = regions.len() - 1;
                for (i, w) in weights.iter().enumerate() {
                    acc += w;
                    if u < acc {
                        pick = i;
                        break;
                    }
                }
                match &regions[pick] {
                    Region::Ball(b) => sample_in_ball(rng, b),
                    Region::Box(b) => b.sample(rng),
                }
            }
        }
    }

    pub fn sample_n(&self, seed: u64, n: usize) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.sample(&mut rng)).collect()
    }

    fn mc_mass(&self, contains: impl Fn(&[f64]) -> bool) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(MASS_MC_SEED);
        let hits = (0..MASS_MC_SAMPLES)
            .filter(|_| contains(&self.sample(&mut rng)))
            .count();
        hits as f64 / MASS_MC_SAMPLES as f64
    }

    /// Mass of one closed ball.
    pub fn ball_mass(&self, ball: &Ball) -> Result<MassValue> {
        if ball.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: ball.dim(),
            });
        }
        Ok(match self {
            DataMeasure::UniformBox(bx) => {
                if bx.contains_ball(ball) {
                    MassValue {
                        value: ball.volume() / bx.volume(),
                        exact: true,
                    }
                } else if ball_box_disjoint(ball, bx) {
                    MassValue {
                        value: 0.0,
                        exact: true,
                    }
                } else {
                    // Ball clipped by the domain boundary: Monte-Carlo, flagged.
                    MassValue {
                        value: self.mc_mass(|x| ball.contains(x)),
                        exact: false,
                    }
                }
            }
            DataMeasure::Mixture { regions, weights } => {
                let mut value = 0.0;
                let mut exact = true;
                for (region, w) in regions.iter().zip(weights) {
                    if *w == 0.0 {
                        continue;
                    }
                    match region {
                        Region::Ball(rb) => {
                            let inter = balls_intersection_volume(
                                rb.dim(),
                                rb.radius,
                                ball.radius,
                                dist(&rb.center, &ball.center),
                            );
                            value += w * inter / rb.volume();
                        }
                        Region::Box(bx) => {
                            if bx.contains_ball(ball) {
                                value += w * ball.volume() / bx.volume();
                            } else if ball_box_disjoint(ball, bx) {
                                // contributes nothing
                            } else {
                                exact = false;
                                let mut rng = ChaCha8Rng::seed_from_u64(MASS_MC_SEED);
                                let hits = (0..MASS_MC_SAMPLES)
                                    .filter(|_| ball.contains(&bx.sample(&mut rng)))
                                    .count();
                                value += w * hits as f64 / MASS_MC_SAMPLES as f64;
                            }
                        }
                    }
                }
                MassValue { value, exact }
            }
        })
    }

    /// Mass of a union of pairwise disjoint balls.
    pub fn ball_union_mass(&self, balls: &[Ball]) -> Result<MassValue> {
        for i in 0..balls.len() {
            for j in (i + 1)..balls.len() {
                if balls[i].surface_distance(&balls[j]) < 0.0 {
                    return Err(Error::OverlappingRegions(format!(
                        "balls {i} and {j} overlap"
                    )));
                }
            }
        }
        let mut value = 0.0;
        let mut exact = true;
        for b in balls {
            let m = self.ball_mass(b)?;
            value += m.value;
            exact &= m.exact;
        }
        Ok(MassValue { value, exact })
    }

    /// Mass of a 1D interval union.
    pub fn interval_union_mass(&self, iv: &IntervalUnion) -> Result<MassValue> {
        if self.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: self.dim(),
            });
        }
        let mass_in = |lo: f64, hi: f64| -> f64 {
            iv.intervals()
                .iter()
                .map(|&(a, b)| overlap_len(a, b, lo, hi))
                .sum::<f64>()
                / (hi - lo)
        };
        Ok(match self {
            DataMeasure::UniformBox(bx) => MassValue {
                value: mass_in(bx.lo[0], bx.hi[0]),
                exact: true,
            },
            DataMeasure::Mixture { regions, weights } => {
                let mut value = 0.0;
                for (region, w) in regions.iter().zip(weights) {
                    let (lo, hi) = match region {
                        Region::Ball(b) => (b.center[0] - b.radius, b.center[0] + b.radius),
                        Region::Box(b) => (b.lo[0], b.hi[0]),
                    };
                    value += w * mass_in(lo, hi);
                }
                MassValue { value, exact: true }
            }
        })
    }

    /// 1D support intervals with their weights, when the measure is 1D.
    fn support_intervals(&self) -> Result<Vec<(f64, f64, f64)>> {
        if self.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: self.dim(),
            });
        }
        Ok(match self {
            DataMeasure::UniformBox(bx) => vec![(bx.lo[0], bx.hi[0], 1.0)],
            DataMeasure::Mixture { regions, weights } => regions
                .iter()
                .zip(weights)
                .map(|(region, w)| match region {
                    Region::Ball(b) => (b.center[0] - b.radius, b.center[0] + b.radius, *w),
                    Region::Box(b) => (b.lo[0], b.hi[0], *w),
                })
                .collect(),
        })
    }
}

fn ball_box_disjoint(ball: &Ball, bx: &BoxDomain) -> bool {
    // Distance from the ball center to the box exceeds the radius.
    let mut d2 = 0.0;
    for (c, (lo, hi)) in ball.center.iter().zip(bx.lo.iter().zip(&bx.hi)) {
        let gap = if c < lo {
            lo - c
        } else if c > hi {
            c - hi
        } else {
            0.0
        };
        d2 += gap * gap;
    }
    d2 > ball.radius * ball.radius
}

/// A region mass together with whether it came from a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassValue {
    pub value: f64,
    pub exact: bool,
}

/// A risk (or excess-risk) value with its evaluation provenance. Exact mode
/// carries a zero-width interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    pub value: f64,
    pub mode: EvalMode,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n: usize,
    pub seed: u64,
}

impl RiskReport {
    fn exact(value: f64) -> Self {
        RiskReport {
            value,
            mode: EvalMode::Exact,
            ci_low: value,
            ci_high: value,
            n: 0,
            seed: 0,
        }
    }

    pub fn half_width(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }
}

/// R(f) = E_x[ f(x)(1 − h(x)) + (1 − f(x)) h(x) ].
///
/// Exact mode requires closed-form region masses: 1D interval geometry, or
/// ball-union classifiers whose balls are concentric with (or disjoint from)
/// the conditional's partitions under a measure with exact ball masses.
pub fn risk(
    f: &HardClassifier,
    h: &Conditional,
    px: &DataMeasure,
    mode: EvalMode,
    mc_samples: usize,
    seed: u64,
) -> Result<RiskReport> {
    if px.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: px.dim(),
        });
    }
    match mode {
        EvalMode::Exact => exact_risk(f, h, px),
        EvalMode::MonteCarlo => Ok(mc_risk(f, h, px, mc_samples, seed)),
    }
}

/// Exact risk when the structure admits it, otherwise seeded Monte Carlo.
pub fn risk_auto(
    f: &HardClassifier,
    h: &Conditional,
    px: &DataMeasure,
    mc_samples: usize,
    seed: u64,
) -> Result<RiskReport> {
    if px.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: px.dim(),
        });
    }
    match exact_risk(f, h, px) {
        Ok(r) => Ok(r),
        Err(Error::ExactUnsupported(_)) => Ok(mc_risk(f, h, px, mc_samples, seed)),
        Err(e) => Err(e),
    }
}

fn exact_risk(f: &HardClassifier, h: &Conditional, px: &DataMeasure) -> Result<RiskReport> {
    if px.dim() == 1 {
        return exact_risk_1d(f, h, px);
    }
    let Conditional::BallUnion(hc) = h else {
        return Err(Error::ExactUnsupported(
            "no exact route for this conditional".into(),
        ));
    };
    let tau = hc.tau();
    let value = match f {
        HardClassifier::Const(b) => {
            let p_i = require_exact(px.ball_union_mass(hc.balls())?)?;
            if *b {
                // Errors where Y = 1 fails inside, plus everywhere outside.
                (0.5 - tau) * p_i + (1.0 - p_i)
            } else {
                (0.5 + tau) * p_i
            }
        }
        HardClassifier::Balls { balls: fballs, .. } => {
            exact_risk_ball_vs_ball(fballs, hc.balls(), tau, px)?
        }
        _ => {
            return Err(Error::ExactUnsupported(
                "classifier region is not represented in closed form".into(),
            ))
        }
    };
    Ok(RiskReport::exact(value))
}

fn require_exact(m: MassValue) -> Result<f64> {
    if m.exact {
        Ok(m.value)
    } else {
        Err(Error::ExactUnsupported(
            "region mass required a Monte-Carlo fallback".into(),
        ))
    }
}

/// Exact risk for a ball-union classifier against a ball-union conditional.
/// Every classifier ball must be concentric with one partition or disjoint
/// from all of them.
fn exact_risk_ball_vs_ball(
    fballs: &[Ball],
    hballs: &[Ball],
    tau: f64,
    px: &DataMeasure,
) -> Result<f64> {
    for i in 0..fballs.len() {
        for j in (i + 1)..fballs.len() {
            if fballs[i].surface_distance(&fballs[j]) < 0.0 {
                return Err(Error::OverlappingRegions("classifier balls overlap".into()));
            }
        }
    }
    let mut matched: Vec<Option<&Ball>> = vec![None; hballs.len()];
    let mut stray = Vec::new();
    for fb in fballs {
        let mut found = false;
        for (k, hb) in hballs.iter().enumerate() {
            let d = dist(&fb.center, &hb.center);
            if d <= CENTER_MATCH_TOL {
                matched[k] = Some(fb);
                found = true;
                break;
            }
        }
        if !found {
            if hballs
                .iter()
                .any(|hb| dist(&fb.center, &hb.center) < fb.radius + hb.radius)
            {
                return Err(Error::ExactUnsupported(
                    "classifier ball intersects a partition non-concentrically".into(),
                ));
            }
            stray.push(fb);
        }
    }
    let mut err = 0.0;
    for (k, hb) in hballs.iter().enumerate() {
        let p_h = require_exact(px.ball_mass(hb)?)?;
        match matched[k] {
            None => err += (0.5 + tau) * p_h,
            Some(fb) => {
                if fb.radius <= hb.radius {
                    let p_f = require_exact(px.ball_mass(fb)?)?;
                    err += (0.5 - tau) * p_f + (0.5 + tau) * (p_h - p_f);
                } else {
                    // Dilated classifier ball: it must stay clear of the
                    // other partitions for the closed form to hold.
                    for (k2, other) in hballs.iter().enumerate() {
                        if k2 != k && dist(&fb.center, &other.center) < fb.radius + other.radius {
                            return Err(Error::ExactUnsupported(
                                "dilated classifier ball reaches another partition".into(),
                            ));
                        }
                    }
                    let p_f = require_exact(px.ball_mass(fb)?)?;
                    err += (0.5 - tau) * p_h + (p_f - p_h);
                }
            }
        }
    }
    for fb in stray {
        err += require_exact(px.ball_mass(fb)?)?;
    }
    Ok(err)
}

fn exact_risk_1d(f: &HardClassifier, h: &Conditional, px: &DataMeasure) -> Result<RiskReport> {
    let hw = h.to_piecewise_1d()?;
    let support = px.support_intervals()?;
    let full = {
        let lo = support.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
        let hi = support
            .iter()
            .map(|s| s.1)
            .fold(f64::NEG_INFINITY, f64::max);
        IntervalUnion::new(vec![(lo, hi)])
    };
    let f_region = match f {
        HardClassifier::Const(true) => full,
        HardClassifier::Const(false) => IntervalUnion::empty(),
        HardClassifier::Intervals(iv) => iv.clone(),
        HardClassifier::Balls { balls, dim: 1 } => IntervalUnion::new(
            balls
                .iter()
                .map(|b| (b.center[0] - b.radius, b.center[0] + b.radius))
                .collect(),
        ),
        _ => {
            return Err(Error::ExactUnsupported(
                "classifier region is not represented in closed form".into(),
            ))
        }
    };
    let mut value = 0.0;
    for (lo, hi, w) in support {
        let fin = f_region.intersect(lo, hi);
        let fout = fin.complement_within(lo, hi);
        let err = (fin.measure() - hw.integral_over_union(&fin)) + hw.integral_over_union(&fout);
        value += w * err / (hi - lo);
    }
    Ok(RiskReport::exact(value))
}

fn mc_risk(
    f: &HardClassifier,
    h: &Conditional,
    px: &DataMeasure,
    n: usize,
    seed: u64,
) -> RiskReport {
    let n = n.max(1);
    let points = px.sample_n(mix_seed(seed, &[0x7269_736b]), n);
    let errs: Vec<f64> = points
        .par_iter()
        .map(|x| {
            let hx = h.eval(x);
            if f.eval(x) {
                1.0 - hx
            } else {
                hx
            }
        })
        .collect();
    let mean = errs.iter().sum::<f64>() / n as f64;
    let var = errs.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (n as f64 - 1.0).max(1.0);
    let half = normal_ci_z(0.99) * (var / n as f64).sqrt();
    RiskReport {
        value: mean,
        mode: EvalMode::MonteCarlo,
        ci_low: (mean - half).max(0.0),
        ci_high: (mean + half).min(1.0),
        n,
        seed,
    }
}

/// Excess risk Δ_{α,β}(h) = R(Smooth_β(ψ(h ∗ p_α))) − R(ψ(h)).
///
/// `risk_samples` is the Monte-Carlo point budget per risk (the vote budget
/// lives in `cfg.mc_samples`). In Monte-Carlo mode each component risk still
/// uses its closed form when one exists; intervals combine in quadrature.
/// The excess value itself may be negative only up to Monte-Carlo noise.
pub fn excess_risk(
    h: &Conditional,
    px: &DataMeasure,
    cfg: &SmoothingConfig,
    risk_samples: usize,
) -> Result<RiskReport> {
    cfg.validate()?;
    let base = h.threshold();
    let pipeline = two_stage(h, cfg)?;
    let (smoothed_risk, base_risk) = match cfg.mode {
        EvalMode::Exact => (
            risk(&pipeline, h, px, EvalMode::Exact, 0, cfg.seed)?,
            risk(&base, h, px, EvalMode::Exact, 0, cfg.seed)?,
        ),
        EvalMode::MonteCarlo => (
            risk_auto(&pipeline, h, px, risk_samples, mix_seed(cfg.seed, &[1]))?,
            risk_auto(&base, h, px, risk_samples, mix_seed(cfg.seed, &[2]))?,
        ),
    };
    let value = smoothed_risk.value - base_risk.value;
    let half = (smoothed_risk.half_width().powi(2) + base_risk.half_width().powi(2)).sqrt();
    let mode = if smoothed_risk.mode == EvalMode::Exact && base_risk.mode == EvalMode::Exact {
        EvalMode::Exact
    } else {
        EvalMode::MonteCarlo
    };
    Ok(RiskReport {
        value,
        mode,
        ci_low: value - half,
        ci_high: value + half,
        n: smoothed_risk.n.max(base_risk.n),
        seed: cfg.seed,
    })
}

/// Closed-form excess risk for a ball-union conditional:
/// [(0.5 + τ) p_X(I) − 2τ p_X(I_{α,β})] − R(ψ(h)), with the shrinkage
/// pipeline supplying the radii of I_{α,β}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormExcess {
    pub value: f64,
    /// True when the separation regime backing exactness held
    /// (lower interference distance above both noise scales).
    pub regime_ok: bool,
    /// True when every region mass came from a closed form.
    pub exact_masses: bool,
    pub smoothed_risk: f64,
    pub base_risk: f64,
}

pub fn closed_form_excess(
    c: &BallUnionConditional,
    px: &DataMeasure,
    alpha_model: Option<&NoiseModel>,
    beta_model: Option<&NoiseModel>,
) -> Result<ClosedFormExcess> {
    let tau = c.tau();
    let report = beta_shrinkage(&alpha_shrinkage(c, alpha_model)?, beta_model)?;
    let p_i = px.ball_union_mass(c.balls())?;
    let shrunk = report.alpha_beta_balls();
    let p_iab = px.ball_union_mass(&shrunk)?;
    let base = risk(
        &Conditional::BallUnion(c.clone()).threshold(),
        &Conditional::BallUnion(c.clone()),
        px,
        EvalMode::Exact,
        0,
        0,
    )?;
    let smoothed_risk = (0.5 + tau) * p_i.value - 2.0 * tau * p_iab.value;
    let max_scale = alpha_model
        .map(|m| m.scale())
        .unwrap_or(0.0)
        .max(beta_model.map(|m| m.scale()).unwrap_or(0.0));
    let regime_ok = match c.lower_interference_distance() {
        Ok(gap) => gap > max_scale,
        Err(_) => true,
    };
    Ok(ClosedFormExcess {
        value: smoothed_risk - base.value,
        regime_ok,
        exact_masses: p_i.exact && p_iab.exact,
        smoothed_risk,
        base_risk: base.value,
    })
}

/// Fraction of test points where the pipeline prediction differs from the label.
pub fn empirical_delta(pipeline: &HardClassifier, test_set: &[(Vec<f64>, bool)]) -> Result<f64> {
    if test_set.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let wrong = test_set
        .par_iter()
        .filter(|(x, y)| pipeline.eval(x) != *y)
        .count();
    Ok(wrong as f64 / test_set.len() as f64)
}
