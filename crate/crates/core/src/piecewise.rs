//! Exact 1D engine for piecewise-constant functions: closed-form convolution
//! against the supported noise families and extraction of thresholded
//! positive regions as interval unions.
//!
//! Convolving a piecewise-constant function with a uniform kernel gives a
//! piecewise-linear function, so level sets are solved exactly on each linear
//! segment. The Gaussian case is a finite sum of normal CDF differences and
//! level sets are isolated by a scan plus bisection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::IntervalUnion;
use crate::noise::{NoiseFamily, NoiseModel};
use crate::numeric::normal_cdf;

/// A piecewise-constant function on `[breaks[0], breaks[m]]`, zero outside.
/// Piece `i` carries `values[i]` on `[breaks[i], breaks[i+1])`; the last
/// piece is closed on the right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseConstant {
    breaks: Vec<f64>,
    values: Vec<f64>,
    cum: Vec<f64>,
}

impl PiecewiseConstant {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breaks.len() < 2 || values.len() + 1 != breaks.len() {
            return Err(Error::InvalidParameter(
                "need n+1 breakpoints for n pieces, n >= 1".into(),
            ));
        }
        if breaks
            .windows(2)
            .any(|w| !matches!(w[0].partial_cmp(&w[1]), Some(std::cmp::Ordering::Less)))
        {
            return Err(Error::InvalidParameter(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        if breaks.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "breakpoints and values must be finite".into(),
            ));
        }
        let mut cum = Vec::with_capacity(breaks.len());
        cum.push(0.0);
        for i in 0..values.len() {
            cum.push(cum[i] + values[i] * (breaks[i + 1] - breaks[i]));
        }
        Ok(Self {
            breaks,
            values,
            cum,
        })
    }

    /// Indicator of an interval union, as a 0/1 piecewise-constant function.
    pub fn indicator(region: &IntervalUnion) -> Result<Self> {
        let ivals = region.intervals();
        if ivals.is_empty() {
            return Err(Error::InvalidParameter(
                "indicator of an empty region".into(),
            ));
        }
        let mut breaks = Vec::new();
        let mut values = Vec::new();
        for (k, &(a, b)) in ivals.iter().enumerate() {
            if k == 0 {
                breaks.push(a);
            } else {
                let prev = *breaks.last().unwrap();
                if a > prev {
                    values.push(0.0);
                    breaks.push(a);
                }
            }
            if b > *breaks.last().unwrap() {
                values.push(1.0);
                breaks.push(b);
            }
        }
        if values.is_empty() {
            // Degenerate region of isolated points; measure zero.
            return Err(Error::InvalidParameter("region has zero measure".into()));
        }
        Self::new(breaks, values)
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breaks[0], *self.breaks.last().unwrap())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.domain();
        if x < lo || x > hi {
            return 0.0;
        }
        if x == hi {
            return *self.values.last().unwrap();
        }
        let i = match self.breaks.partition_point(|b| *b <= x) {
            0 => 0,
            k => k - 1,
        };
        self.values[i.min(self.values.len() - 1)]
    }

    /// Antiderivative H(x) = ∫_{-∞}^{x} h, constant outside the domain.
    pub fn antiderivative(&self, x: f64) -> f64 {
        let (lo, hi) = self.domain();
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return *self.cum.last().unwrap();
        }
        let i = match self.breaks.partition_point(|b| *b <= x) {
            0 => 0,
            k => (k - 1).min(self.values.len() - 1),
        };
        self.cum[i] + self.values[i] * (x - self.breaks[i])
    }

    /// ∫_{lo}^{hi} h, exact.
    pub fn integral_over(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        self.antiderivative(hi) - self.antiderivative(lo)
    }

    /// ∫ over an interval union, exact.
    pub fn integral_over_union(&self, region: &IntervalUnion) -> f64 {
        region
            .intervals()
            .iter()
            .map(|&(a, b)| self.integral_over(a, b))
            .sum()
    }

    /// (h * p_noise)(x), closed form for both families.
    pub fn convolve_eval(&self, noise: &NoiseModel, x: f64) -> f64 {
        match noise.family() {
            NoiseFamily::UniformBall => {
                let w = noise.scale();
                // A window inside a single piece averages to that piece's
                // value; skipping the antiderivative difference avoids
                // cancellation for tiny scales.
                let i = self.breaks.partition_point(|b| *b <= x - w);
                let j = self.breaks.partition_point(|b| *b <= x + w);
                if i == j {
                    return if i == 0 || i == self.breaks.len() {
                        0.0
                    } else {
                        self.values[i - 1]
                    };
                }
                (self.antiderivative(x + w) - self.antiderivative(x - w)) / (2.0 * w)
            }
            NoiseFamily::GaussianIso => {
                let s = noise.scale();
                let mut acc = 0.0;
                for i in 0..self.values.len() {
                    if self.values[i] == 0.0 {
                        continue;
                    }
                    acc += self.values[i]
                        * (normal_cdf((x - self.breaks[i]) / s)
                            - normal_cdf((x - self.breaks[i + 1]) / s));
                }
                acc
            }
        }
    }

    /// The closed region `{ x : (h * p_noise)(x) >= level }`; with no noise,
    /// the closure of `{ h >= level }`.
    pub fn positive_region(&self, noise: Option<&NoiseModel>, level: f64) -> IntervalUnion {
        match noise {
            None => {
                let pieces = (0..self.values.len())
                    .filter(|&i| self.values[i] >= level)
                    .map(|i| (self.breaks[i], self.breaks[i + 1]))
                    .collect();
                IntervalUnion::new(pieces)
            }
            Some(m) => match m.family() {
                NoiseFamily::UniformBall => self.positive_region_uniform(m.scale(), level),
                NoiseFamily::GaussianIso => self.positive_region_gaussian(m.scale(), level),
            },
        }
    }

    fn positive_region_uniform(&self, w: f64, level: f64) -> IntervalUnion {
        // The convolution is piecewise linear with kinks at breaks ± w.
        let mut knots: Vec<f64> = Vec::with_capacity(2 * self.breaks.len());
        for &b in &self.breaks {
            knots.push(b - w);
            knots.push(b + w);
        }
        knots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        knots.dedup();

        let conv = |x: f64| (self.antiderivative(x + w) - self.antiderivative(x - w)) / (2.0 * w);
        let mut pieces = Vec::new();
        for seg in knots.windows(2) {
            let (u, v) = (seg[0], seg[1]);
            let (fu, fv) = (conv(u), conv(v));
            let at_least = |f: f64| f >= level;
            match (at_least(fu), at_least(fv)) {
                (true, true) => pieces.push((u, v)),
                (true, false) => {
                    let t = u + (level - fu) / (fv - fu) * (v - u);
                    pieces.push((u, t));
                }
                (false, true) => {
                    let t = u + (level - fu) / (fv - fu) * (v - u);
                    pieces.push((t, v));
                }
                (false, false) => {}
            }
        }
        IntervalUnion::new(pieces)
    }

    fn positive_region_gaussian(&self, s: f64, level: f64) -> IntervalUnion {
        let (lo, hi) = self.domain();
        let (scan_lo, scan_hi) = (lo - 10.0 * s, hi + 10.0 * s);
        let min_piece = self
            .breaks
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        let step = (s.min(min_piece) / 32.0).max((scan_hi - scan_lo) / 2_000_000.0);
        let g = |x: f64| {
            let m = NoiseModel::new(NoiseFamily::GaussianIso, s, 1).unwrap();
            self.convolve_eval(&m, x) - level
        };

        let n = ((scan_hi - scan_lo) / step).ceil() as usize;
        let mut pieces = Vec::new();
        let mut open_start: Option<f64> = None;
        let mut prev_x = scan_lo;
        let mut prev_g = g(scan_lo);
        for k in 1..=n {
            let x = scan_lo + (scan_hi - scan_lo) * k as f64 / n as f64;
            let gx = g(x);
            if prev_g < 0.0 && gx >= 0.0 {
                open_start = Some(bisect_root(&g, prev_x, x));
            } else if prev_g >= 0.0 && gx < 0.0 {
                let start = open_start.take().unwrap_or(scan_lo);
                pieces.push((start, bisect_root(&g, prev_x, x)));
            }
            prev_x = x;
            prev_g = gx;
        }
        if let Some(start) = open_start {
            pieces.push((start, scan_hi));
        }
        IntervalUnion::new(pieces)
    }
}

fn bisect_root(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    // g(lo) and g(hi) straddle zero.
    let mut glo = g(lo);
    for _ in 0..200 {
        if hi - lo < 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if (gm >= 0.0) == (glo >= 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
