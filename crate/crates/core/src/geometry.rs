//! Euclidean balls, axis-aligned boxes, and 1D interval unions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::ball_volume;

/// A closed Euclidean ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::InvalidParameter(
                "ball center must be nonempty".into(),
            ));
        }
        if radius.is_nan() || radius <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn volume(&self) -> f64 {
        ball_volume(self.dim(), self.radius)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        dist(&self.center, x) <= self.radius
    }

    /// Gap between the two ball surfaces: ‖c_i − c_j‖ − r_i − r_j.
    pub fn surface_distance(&self, other: &Ball) -> f64 {
        dist(&self.center, &other.center) - self.radius - other.radius
    }
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Smallest pairwise surface distance of a ball list, if there are >= 2 balls.
pub fn min_surface_distance(balls: &[Ball]) -> Option<f64> {
    if balls.len() < 2 {
        return None;
    }
    let mut best = f64::INFINITY;
    for i in 0..balls.len() {
        for j in (i + 1)..balls.len() {
            best = best.min(balls[i].surface_distance(&balls[j]));
        }
    }
    Some(best)
}

/// Samples a point uniformly from a ball: uniform direction, radius ~ r·U^(1/d).
pub fn sample_in_ball<R: Rng>(rng: &mut R, ball: &Ball) -> Vec<f64> {
    let d = ball.dim();
    let dir = loop {
        let g: Vec<f64> = (0..d).map(|_| standard_normal(rng)).collect();
        let n = norm(&g);
        if n > 1e-150 {
            break g.into_iter().map(|v| v / n).collect::<Vec<f64>>();
        }
    };
    let u: f64 = rng.random();
    let r = ball.radius * u.powf(1.0 / d as f64);
    dir.iter()
        .zip(&ball.center)
        .map(|(v, c)| c + r * v)
        .collect()
}

/// One standard normal draw via Box-Muller.
pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// An axis-aligned box with nondegenerate extent in every coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidParameter(
                "box bounds must be nonempty and equal length".into(),
            ));
        }
        if lo
            .iter()
            .zip(&hi)
            .any(|(a, b)| !matches!(a.partial_cmp(b), Some(std::cmp::Ordering::Less)))
        {
            return Err(Error::InvalidParameter(
                "box must satisfy lo < hi in every coordinate".into(),
            ));
        }
        Ok(Self { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (a, b))| *v >= *a && *v <= *b)
    }

    /// Whether the closed ball lies entirely inside the box.
    pub fn contains_ball(&self, ball: &Ball) -> bool {
        ball.center
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(c, (a, b))| c - ball.radius >= *a && c + ball.radius <= *b)
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| rng.random_range(*a..*b))
            .collect()
    }
}

/// A finite union of closed intervals, kept sorted and non-overlapping.
/// Intervals that touch at an endpoint are merged, matching the convention
/// that thresholded regions are closed sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self {
            intervals: Vec::new(),
        }
    }

    pub fn new(mut raw: Vec<(f64, f64)>) -> Self {
        raw.retain(|(a, b)| b >= a);
        raw.sort_by(|x, y| x.partial_cmp(y).expect("non-NaN interval endpoints"));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Self { intervals: merged }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| x >= a && x <= b)
    }

    /// Intersection with the closed interval `[lo, hi]`.
    pub fn intersect(&self, lo: f64, hi: f64) -> IntervalUnion {
        let kept = self
            .intervals
            .iter()
            .filter_map(|&(a, b)| {
                let (x, y) = (a.max(lo), b.min(hi));
                (y >= x).then_some((x, y))
            })
            .collect();
        IntervalUnion { intervals: kept }
    }

    /// Complement within `[lo, hi]`.
    pub fn complement_within(&self, lo: f64, hi: f64) -> IntervalUnion {
        let mut out = Vec::new();
        let mut cursor = lo;
        for &(a, b) in &self.intersect(lo, hi).intervals {
            if a > cursor {
                out.push((cursor, a));
            }
            cursor = cursor.max(b);
        }
        if cursor < hi {
            out.push((cursor, hi));
        }
        IntervalUnion { intervals: out }
    }
}
