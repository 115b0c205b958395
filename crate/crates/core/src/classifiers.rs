//! Conditional distributions h, their induced hard classifiers ψ(h),
//! interference distances between positive partitions, the noise-convolved
//! conditional h ∗ p, and bounded perturbations of it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist, Ball, BoxDomain, IntervalUnion};
use crate::noise::{NoiseFamily, NoiseModel};
use crate::numeric::{normal_cdf, overlap_len, seed_from_point};
use crate::piecewise::PiecewiseConstant;

/// Decision mapping ψ(z) = 1[z >= 0.5]; ties classify as positive.
pub fn psi(z: f64) -> bool {
    z >= 0.5
}

/// Minimum positive slack required between balls at construction.
pub const DISJOINTNESS_SLACK: f64 = 1e-9;

/// A conditional that takes the value `0.5 + tau` on a union of pairwise
/// disjoint closed balls and `0` elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallUnionConditional {
    balls: Vec<Ball>,
    tau: f64,
    dim: usize,
}

impl BallUnionConditional {
    pub fn new(balls: Vec<Ball>, tau: f64) -> Result<Self> {
        if balls.is_empty() {
            return Err(Error::InvalidParameter("need at least one ball".into()));
        }
        // tau = 0.5 (a deterministic conditional) is admitted; it only rules
        // out the negative-partition radii, which clip to zero downstream.
        if !(0.0..=0.5).contains(&tau) {
            return Err(Error::InvalidParameter(format!(
                "tau must lie in [0, 0.5], got {tau}"
            )));
        }
        let dim = balls[0].dim();
        if balls.iter().any(|b| b.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: 0,
            });
        }
        for i in 0..balls.len() {
            for j in (i + 1)..balls.len() {
                let gap = balls[i].surface_distance(&balls[j]);
                if gap < DISJOINTNESS_SLACK {
                    return Err(Error::OverlappingRegions(format!(
                        "balls {i} and {j} have surface gap {gap}"
                    )));
                }
            }
        }
        Ok(Self { balls, tau, dim })
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        if self.balls.iter().any(|b| b.contains(x)) {
            0.5 + self.tau
        } else {
            0.0
        }
    }

    /// Minimum pairwise distance between positive partitions.
    pub fn lower_interference_distance(&self) -> Result<f64> {
        self.pairwise_distances()?
            .into_iter()
            .min_by(|a, b| a.partial_cmp(b).unwrap())
            .ok_or(Error::UndefinedInterference)
    }

    /// Maximum pairwise distance between positive partitions.
    pub fn upper_interference_distance(&self) -> Result<f64> {
        self.pairwise_distances()?
            .into_iter()
            .max_by(|a, b| a.partial_cmp(b).unwrap())
            .ok_or(Error::UndefinedInterference)
    }

    fn pairwise_distances(&self) -> Result<Vec<f64>> {
        if self.balls.len() < 2 {
            return Err(Error::UndefinedInterference);
        }
        let mut out = Vec::with_capacity(self.balls.len() * (self.balls.len() - 1) / 2);
        for i in 0..self.balls.len() {
            for j in (i + 1)..self.balls.len() {
                out.push(self.balls[i].surface_distance(&self.balls[j]));
            }
        }
        Ok(out)
    }

    /// Ball list as 1D intervals (only meaningful when dim = 1).
    fn to_piecewise_1d(&self) -> Result<PiecewiseConstant> {
        if self.dim != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: self.dim,
            });
        }
        let ivals: Vec<(f64, f64)> = self
            .balls
            .iter()
            .map(|b| (b.center[0] - b.radius, b.center[0] + b.radius))
            .collect();
        let region = IntervalUnion::new(ivals);
        let ind = PiecewiseConstant::indicator(&region)?;
        let values = ind.values().iter().map(|v| v * (0.5 + self.tau)).collect();
        PiecewiseConstant::new(ind.breaks().to_vec(), values)
    }
}

/// A general piecewise-constant 1D conditional with values in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piecewise1DConditional {
    pw: PiecewiseConstant,
}

impl Piecewise1DConditional {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidParameter(
                "conditional values must lie in [0, 1]".into(),
            ));
        }
        Ok(Self {
            pw: PiecewiseConstant::new(breakpoints, values)?,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.pw.eval(x)
    }

    pub fn piecewise(&self) -> &PiecewiseConstant {
        &self.pw
    }

    /// Domain endpoints (first and last breakpoints).
    pub fn domain(&self) -> (f64, f64) {
        self.pw.domain()
    }
}

/// The conditional distributions the pipeline operates on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Conditional {
    BallUnion(BallUnionConditional),
    Piecewise1D(Piecewise1DConditional),
}

impl Conditional {
    pub fn dim(&self) -> usize {
        match self {
            Conditional::BallUnion(c) => c.dim(),
            Conditional::Piecewise1D(_) => 1,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Conditional::BallUnion(c) => c.eval(x),
            Conditional::Piecewise1D(c) => c.eval(x[0]),
        }
    }

    /// The hard classifier ψ(h).
    pub fn threshold(&self) -> HardClassifier {
        match self {
            // Inside the union h = 0.5 + tau >= 0.5, outside h = 0.
            Conditional::BallUnion(c) => HardClassifier::Balls {
                balls: c.balls().to_vec(),
                dim: c.dim(),
            },
            Conditional::Piecewise1D(c) => {
                HardClassifier::Intervals(c.piecewise().positive_region(None, 0.5))
            }
        }
    }

    /// 1D view as a piecewise-constant function, when the dimension allows.
    pub fn to_piecewise_1d(&self) -> Result<PiecewiseConstant> {
        match self {
            Conditional::BallUnion(c) => c.to_piecewise_1d(),
            Conditional::Piecewise1D(c) => Ok(c.piecewise().clone()),
        }
    }
}

/// The noise-convolved conditional h ∗ p. Evaluation is closed-form for both
/// supported conditional kinds: disjoint-ball unions convolve ball by ball
/// through the shifted CDF, and 1D piecewise conditionals integrate exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftConditional {
    cond: Conditional,
    noise: Option<NoiseModel>,
}

/// Builds the evaluator for (h ∗ p_noise); `None` noise is the identity.
pub fn soft_convolve(h: &Conditional, noise: Option<&NoiseModel>) -> Result<SoftConditional> {
    if let Some(m) = noise {
        if m.dim() != h.dim() {
            return Err(Error::DimensionMismatch {
                expected: h.dim(),
                got: m.dim(),
            });
        }
    }
    Ok(SoftConditional {
        cond: h.clone(),
        noise: noise.cloned(),
    })
}

impl SoftConditional {
    pub fn dim(&self) -> usize {
        self.cond.dim()
    }

    pub fn conditional(&self) -> &Conditional {
        &self.cond
    }

    pub fn noise(&self) -> Option<&NoiseModel> {
        self.noise.as_ref()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let Some(noise) = &self.noise else {
            return self.cond.eval(x);
        };
        match &self.cond {
            Conditional::BallUnion(c) => {
                // The balls are disjoint, so the convolution is the sum of
                // per-ball masses (0.5 + tau) * Phi(r_j, x - c_j).
                let reach = match noise.family() {
                    NoiseFamily::UniformBall => noise.scale(),
                    // Beyond 12 sigma the Gaussian mass is < 1e-30.
                    NoiseFamily::GaussianIso => 12.0 * noise.scale(),
                };
                let mut acc = 0.0;
                for b in c.balls() {
                    let t = dist(&b.center, x);
                    if t <= b.radius + reach {
                        acc += noise.shifted_cdf_radial(b.radius, t).0;
                    }
                }
                (0.5 + c.tau()) * acc
            }
            Conditional::Piecewise1D(c) => c.piecewise().convolve_eval(noise, x[0]),
        }
    }

    /// The hard classifier ψ(h ∗ p): exact interval regions in 1D; exact
    /// shrunk balls for uniform-ball noise when every surface gap exceeds the
    /// noise scale (no cross-talk between partitions); otherwise a pointwise
    /// threshold of the closed-form soft value.
    pub fn threshold(&self) -> HardClassifier {
        let Some(noise) = &self.noise else {
            return self.cond.threshold();
        };
        match &self.cond {
            Conditional::Piecewise1D(c) => {
                HardClassifier::Intervals(c.piecewise().positive_region(Some(noise), 0.5))
            }
            Conditional::BallUnion(c) => {
                let uniform = noise.family() == NoiseFamily::UniformBall;
                let separated = match c.lower_interference_distance() {
                    Ok(gap) => gap > noise.scale(),
                    Err(_) => true, // single ball
                };
                if uniform && separated {
                    let level = 0.5 / (0.5 + c.tau());
                    let mut shrunk = Vec::new();
                    for b in c.balls() {
                        match noise.norm_inverse(b.radius, level) {
                            Ok(r) if r > 0.0 => shrunk.push(Ball {
                                center: b.center.clone(),
                                radius: r,
                            }),
                            _ => {} // vanished partition
                        }
                    }
                    if shrunk.is_empty() {
                        HardClassifier::Const(false)
                    } else {
                        HardClassifier::Balls {
                            balls: shrunk,
                            dim: c.dim(),
                        }
                    }
                } else {
                    HardClassifier::Threshold(self.clone())
                }
            }
        }
    }
}

/// A deterministic classifier x -> {0, 1}. The structured variants keep exact
/// evaluation (and exact smoothing) available; `McSmoothed` votes by seeded
/// Monte Carlo with the seed derived from the evaluation point, so results do
/// not depend on call order.
#[derive(Debug, Clone)]
pub enum HardClassifier {
    Const(bool),
    /// Indicator of a union of pairwise disjoint closed balls.
    Balls {
        balls: Vec<Ball>,
        dim: usize,
    },
    /// Indicator of a closed 1D interval union.
    Intervals(IntervalUnion),
    /// Pointwise threshold ψ(h ∗ p) of a closed-form soft conditional.
    Threshold(SoftConditional),
    /// Pointwise threshold ψ(g) of a perturbed conditional.
    PerturbedThreshold(PerturbedClassifier),
    /// Smoothed vote over a disjoint ball union: s(x) = Σ_j Φ(r_j, x − c_j),
    /// exact pointwise even where the decision region is not itself a ball union.
    SmoothedBalls {
        balls: Vec<Ball>,
        noise: NoiseModel,
    },
    /// Monte-Carlo majority vote of `base` under `noise`.
    McSmoothed {
        base: Box<HardClassifier>,
        noise: NoiseModel,
        samples: usize,
        seed: u64,
    },
}

impl HardClassifier {
    /// Ambient dimension, when the classifier pins one down.
    pub fn dim(&self) -> Option<usize> {
        match self {
            HardClassifier::Const(_) => None,
            HardClassifier::Balls { dim, .. } => Some(*dim),
            HardClassifier::Intervals(_) => Some(1),
            HardClassifier::Threshold(s) => Some(s.dim()),
            HardClassifier::PerturbedThreshold(g) => Some(g.dim()),
            HardClassifier::SmoothedBalls { noise, .. } => Some(noise.dim()),
            HardClassifier::McSmoothed { noise, .. } => Some(noise.dim()),
        }
    }

    pub fn eval(&self, x: &[f64]) -> bool {
        match self {
            HardClassifier::Const(b) => *b,
            HardClassifier::Balls { balls, .. } => balls.iter().any(|b| b.contains(x)),
            HardClassifier::Intervals(iv) => iv.contains(x[0]),
            HardClassifier::Threshold(s) => psi(s.eval(x)),
            HardClassifier::PerturbedThreshold(g) => psi(g.eval(x)),
            HardClassifier::SmoothedBalls { balls, noise } => {
                psi(smoothed_ball_vote(balls, noise, x))
            }
            HardClassifier::McSmoothed {
                base,
                noise,
                samples,
                seed,
            } => {
                let s = seed_from_point(*seed, x);
                let (hits, n) = vote_mc(base, noise, x, *samples, s);
                psi(hits as f64 / n as f64)
            }
        }
    }

    /// Exact vote probability P[f(x + V) = 1] when f has a closed-form
    /// smoothing route; `None` otherwise.
    pub fn vote_exact(&self, noise: &NoiseModel, x: &[f64]) -> Option<f64> {
        match self {
            HardClassifier::Const(b) => Some(if *b { 1.0 } else { 0.0 }),
            HardClassifier::Balls { balls, .. } => Some(smoothed_ball_vote(balls, noise, x)),
            HardClassifier::Intervals(iv) => Some(smoothed_interval_vote(iv, noise, x[0])),
            _ => None,
        }
    }
}

/// Σ_j Φ_noise(r_j, x − c_j) over disjoint balls.
fn smoothed_ball_vote(balls: &[Ball], noise: &NoiseModel, x: &[f64]) -> f64 {
    let reach = match noise.family() {
        NoiseFamily::UniformBall => noise.scale(),
        NoiseFamily::GaussianIso => 12.0 * noise.scale(),
    };
    let mut acc = 0.0;
    for b in balls {
        let t = dist(&b.center, x);
        if t <= b.radius + reach {
            acc += noise.shifted_cdf_radial(b.radius, t).0;
        }
    }
    acc.min(1.0)
}

/// P[x + V in the interval union] in 1D, closed form for both families.
fn smoothed_interval_vote(iv: &IntervalUnion, noise: &NoiseModel, x: f64) -> f64 {
    match noise.family() {
        NoiseFamily::UniformBall => {
            let w = noise.scale();
            iv.intervals()
                .iter()
                .map(|&(a, b)| overlap_len(x - w, x + w, a, b))
                .sum::<f64>()
                / (2.0 * w)
        }
        NoiseFamily::GaussianIso => {
            let s = noise.scale();
            iv.intervals()
                .iter()
                .map(|&(a, b)| normal_cdf((b - x) / s) - normal_cdf((a - x) / s))
                .sum()
        }
    }
}

/// Monte-Carlo vote: counts f(x + V) = 1 over `n` seeded draws.
pub fn vote_mc(
    f: &HardClassifier,
    noise: &NoiseModel,
    x: &[f64],
    n: usize,
    seed: u64,
) -> (u64, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = vec![0.0; x.len()];
    let mut shifted = vec![0.0; x.len()];
    let mut hits = 0u64;
    for _ in 0..n {
        noise.sample_one(&mut rng, &mut draw);
        for (s, (xi, di)) in shifted.iter_mut().zip(x.iter().zip(&draw)) {
            *s = xi + di;
        }
        if f.eval(&shifted) {
            hits += 1;
        }
    }
    (hits, n)
}

/// A conditional g with `|g(x) − base(x)| <= eta` everywhere: the base plus a
/// seeded mixture of Gaussian bumps, normalized so the perturbation is
/// bounded by eta pointwise, then clipped into [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedClassifier {
    base: SoftConditional,
    eta: f64,
    bumps: Vec<Bump>,
    amp_sum: f64,
}

#[derive(Debug, Clone, PartialEq)]
struct Bump {
    center: Vec<f64>,
    width: f64,
    amp: f64,
}

impl PerturbedClassifier {
    pub fn new(
        base: SoftConditional,
        eta: f64,
        domain: &BoxDomain,
        n_bumps: usize,
        seed: u64,
    ) -> Result<Self> {
        if !(0.0..0.5).contains(&eta) {
            return Err(Error::InvalidParameter(format!(
                "eta must lie in [0, 0.5), got {eta}"
            )));
        }
        if domain.dim() != base.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                got: domain.dim(),
            });
        }
        if n_bumps == 0 {
            return Err(Error::InvalidParameter("need at least one bump".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let extent = domain
            .lo
            .iter()
            .zip(&domain.hi)
            .map(|(a, b)| b - a)
            .fold(f64::INFINITY, f64::min);
        let bumps: Vec<Bump> = (0..n_bumps)
            .map(|_| Bump {
                center: domain.sample(&mut rng),
                width: rng.random_range(0.05..0.3) * extent,
                amp: rng.random_range(-1.0..1.0),
            })
            .collect();
        let amp_sum = bumps.iter().map(|b| b.amp.abs()).sum::<f64>().max(1e-12);
        Ok(Self {
            base,
            eta,
            bumps,
            amp_sum,
        })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn base(&self) -> &SoftConditional {
        &self.base
    }

    /// Perturbation value in [-eta, eta].
    pub fn perturbation(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for b in &self.bumps {
            let d2: f64 = b.center.iter().zip(x).map(|(c, v)| (c - v) * (c - v)).sum();
            acc += b.amp * (-d2 / (2.0 * b.width * b.width)).exp();
        }
        self.eta * acc / self.amp_sum
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.base.eval(x) + self.perturbation(x)).clamp(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ball(center: Vec<f64>, r: f64) -> Ball {
        Ball::new(center, r).unwrap()
    }

    #[test]
    fn psi_threshold_convention() {
        assert!(psi(0.5));
        assert!(!psi(0.4999));
        assert!(psi(1.0));
    }

    #[test]
    fn ball_union_rejects_overlap_and_bad_tau() {
        let b1 = ball(vec![0.0, 0.0], 1.0);
        let b2 = ball(vec![1.5, 0.0], 1.0);
        assert!(matches!(
            BallUnionConditional::new(vec![b1.clone(), b2], 0.1),
            Err(Error::OverlappingRegions(_))
        ));
        assert!(BallUnionConditional::new(vec![b1.clone()], 0.6).is_err());
        // tau = 0.5 is the deterministic-label limit and is accepted.
        assert!(BallUnionConditional::new(vec![b1], 0.5).is_ok());
    }

    #[test]
    fn interference_distances_two_unit_balls() {
        let c = BallUnionConditional::new(
            vec![ball(vec![0.0, 0.0], 1.0), ball(vec![4.0, 0.0], 1.0)],
            0.1,
        )
        .unwrap();
        assert!((c.lower_interference_distance().unwrap() - 2.0).abs() < 1e-12);
        assert!((c.upper_interference_distance().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn interference_distance_matches_brute_force_on_random_balls() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let mut balls = Vec::new();
            while balls.len() < 3 {
                let cand = ball(
                    vec![rng.random_range(0.0..50.0), rng.random_range(0.0..50.0)],
                    rng.random_range(0.5..3.0),
                );
                if balls
                    .iter()
                    .all(|b: &Ball| cand.surface_distance(b) > DISJOINTNESS_SLACK)
                {
                    balls.push(cand);
                }
            }
            let c = BallUnionConditional::new(balls.clone(), 0.2).unwrap();
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for i in 0..balls.len() {
                for j in 0..balls.len() {
                    if i != j {
                        let d = dist(&balls[i].center, &balls[j].center)
                            - balls[i].radius
                            - balls[j].radius;
                        lo = lo.min(d);
                        hi = hi.max(d);
                    }
                }
            }
            assert!((c.lower_interference_distance().unwrap() - lo).abs() < 1e-12);
            assert!((c.upper_interference_distance().unwrap() - hi).abs() < 1e-12);
        }
    }

    #[test]
    fn interference_needs_two_balls() {
        let c = BallUnionConditional::new(vec![ball(vec![0.0], 1.0)], 0.1).unwrap();
        assert!(matches!(
            c.lower_interference_distance(),
            Err(Error::UndefinedInterference)
        ));
    }

    #[test]
    fn one_dim_construction_upper_interference() {
        // Positive pieces [-0.25, -0.02] and [0.02, 0.25] as 1D balls.
        let c = BallUnionConditional::new(
            vec![ball(vec![-0.135], 0.115), ball(vec![0.135], 0.115)],
            0.5,
        )
        .unwrap();
        assert!((c.upper_interference_distance().unwrap() - 0.04).abs() < 1e-12);
    }

    #[test]
    fn soft_convolve_single_ball_center_value() {
        // Ball r=1, tau=0.1, uniform alpha=0.2: at the center the noise ball
        // is inside the partition, so the value is (0.5 + 0.1) * 1.
        let h = Conditional::BallUnion(
            BallUnionConditional::new(vec![ball(vec![0.0], 1.0)], 0.1).unwrap(),
        );
        let m = NoiseModel::new(NoiseFamily::UniformBall, 0.2, 1).unwrap();
        let s = soft_convolve(&h, Some(&m)).unwrap();
        assert!((s.eval(&[0.0]) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn soft_convolve_tiny_scale_recovers_h() {
        let h = Conditional::BallUnion(
            BallUnionConditional::new(
                vec![ball(vec![0.0, 0.0], 1.0), ball(vec![5.0, 0.0], 1.0)],
                0.25,
            )
            .unwrap(),
        );
        let m = NoiseModel::new(NoiseFamily::UniformBall, 1e-9, 2).unwrap();
        let s = soft_convolve(&h, Some(&m)).unwrap();
        for x in [[0.0, 0.0], [0.5, 0.0], [2.5, 0.0], [5.0, 0.5]] {
            assert!((s.eval(&x) - h.eval(&x)).abs() < 1e-9, "{x:?}");
        }
    }

    #[test]
    fn soft_convolve_piecewise_matches_grid_oracle() {
        // Two positive bumps around a narrow central gap.
        let h = Conditional::Piecewise1D(
            Piecewise1DConditional::new(
                vec![-0.5, -0.25, -0.02, 0.02, 0.25, 0.5],
                vec![0.0, 1.0, 0.0, 1.0, 0.0],
            )
            .unwrap(),
        );
        let m = NoiseModel::new(NoiseFamily::UniformBall, 0.05, 1).unwrap();
        let s = soft_convolve(&h, Some(&m)).unwrap();
        // Fine-grid quadrature oracle.
        let n = 2_000_000;
        let (a, b) = (-0.6, 0.6);
        let dt = (b - a) / n as f64;
        let mut acc = 0.0;
        for k in 0..n {
            let t = a + (k as f64 + 0.5) * dt;
            acc += h.eval(&[t]) * m.pdf(&[0.0 - t]).unwrap() * dt;
        }
        assert!(
            (s.eval(&[0.0]) - acc).abs() < 1e-6,
            "exact {} oracle {acc}",
            s.eval(&[0.0])
        );
        assert!((s.eval(&[0.0]) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn soft_values_stay_in_unit_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = Conditional::BallUnion(
            BallUnionConditional::new(
                vec![ball(vec![0.0, 0.0], 2.0), ball(vec![4.5, 0.0], 1.0)],
                0.45,
            )
            .unwrap(),
        );
        for family in [NoiseFamily::UniformBall, NoiseFamily::GaussianIso] {
            let m = NoiseModel::new(family, 1.3, 2).unwrap();
            let s = soft_convolve(&h, Some(&m)).unwrap();
            for _ in 0..200 {
                let x = [rng.random_range(-4.0..8.0), rng.random_range(-4.0..4.0)];
                let v = s.eval(&x);
                assert!((0.0..=1.0).contains(&v), "{x:?} -> {v}");
            }
        }
    }

    #[test]
    fn exact_ball_convolution_agrees_with_mc_when_separated() {
        let h = BallUnionConditional::new(
            vec![ball(vec![0.0, 0.0], 1.0), ball(vec![4.0, 0.0], 1.0)],
            0.2,
        )
        .unwrap();
        let m = NoiseModel::new(NoiseFamily::UniformBall, 0.6, 2).unwrap();
        let s = soft_convolve(&Conditional::BallUnion(h.clone()), Some(&m)).unwrap();
        let n = 400_000;
        let draws = m.sample(4, n);
        for x in [[0.8, 0.0], [1.2, 0.3], [3.4, 0.0]] {
            let exact = s.eval(&x);
            let mc: f64 = draws
                .iter()
                .map(|v| h.eval(&[x[0] + v[0], x[1] + v[1]]))
                .sum::<f64>()
                / n as f64;
            let sigma = ((exact * (1.0 - exact)).max(0.05) / n as f64).sqrt() * 0.7;
            assert!(
                (exact - mc).abs() < 4.0 * sigma,
                "{x:?}: exact {exact} mc {mc}"
            );
        }
    }

    #[test]
    fn threshold_of_separated_ball_union_is_shrunk_balls() {
        let h = Conditional::BallUnion(
            BallUnionConditional::new(vec![ball(vec![0.0], 1.0), ball(vec![10.0], 1.0)], 0.1)
                .unwrap(),
        );
        let m = NoiseModel::new(NoiseFamily::UniformBall, 0.2, 1).unwrap();
        let hard = soft_convolve(&h, Some(&m)).unwrap().threshold();
        match hard {
            HardClassifier::Balls { balls, .. } => {
                assert_eq!(balls.len(), 2);
                let want = 1.2 - 0.4 * (0.5 / 0.6);
                for b in balls {
                    assert!((b.radius - want).abs() < 1e-9, "radius {}", b.radius);
                }
            }
            other => panic!("expected shrunk balls, got {other:?}"),
        }
    }

    #[test]
    fn perturbed_classifier_stays_within_eta() {
        let h = Conditional::BallUnion(
            BallUnionConditional::new(vec![ball(vec![0.0, 0.0], 2.0)], 0.2).unwrap(),
        );
        let m = NoiseModel::new(NoiseFamily::UniformBall, 0.5, 2).unwrap();
        let base = soft_convolve(&h, Some(&m)).unwrap();
        let domain = BoxDomain::new(vec![-4.0, -4.0], vec![4.0, 4.0]).unwrap();
        let g = PerturbedClassifier::new(base.clone(), 0.1, &domain, 6, 77).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let x = [rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0)];
            let gv = g.eval(&x);
            assert!((0.0..=1.0).contains(&gv));
            assert!((gv - base.eval(&x)).abs() <= 0.1 + 1e-12);
        }
        // Deterministic per seed.
        let g2 = PerturbedClassifier::new(base, 0.1, &domain, 6, 77).unwrap();
        assert_eq!(g.eval(&[0.3, -1.0]), g2.eval(&[0.3, -1.0]));
    }

    #[test]
    fn mc_vote_is_deterministic_per_point() {
        let f = HardClassifier::Balls {
            balls: vec![ball(vec![0.0, 0.0], 1.0)],
            dim: 2,
        };
        let m = NoiseModel::new(NoiseFamily::GaussianIso, 0.7, 2).unwrap();
        let (h1, _) = vote_mc(&f, &m, &[0.5, 0.0], 2000, 9);
        let (h2, _) = vote_mc(&f, &m, &[0.5, 0.0], 2000, 9);
        assert_eq!(h1, h2);
    }
}
