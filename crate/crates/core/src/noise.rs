//! Nice single-parameter noise distributions (uniform ball, isotropic
//! Gaussian) together with the CDF machinery used by shrinkage and bound
//! computations: the shifted CDF Φ_θ(r, x), its norm inverse A_{θ,r}(c),
//! and the CDF Ψ_θ of the squared noise norm.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{norm, standard_normal};
use crate::numeric::{
    ball_volume, balls_intersection_volume, bisect_largest_at_least, chi2_cdf, chi2_quantile,
    lens_area, noncentral_chi2_cdf, overlap_len,
};

/// Supported noise families. Both are spherically symmetric with densities
/// non-increasing in the argument norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoiseFamily {
    /// Uniform on the closed ball of radius `scale`.
    UniformBall,
    /// Isotropic Gaussian with standard deviation `scale` per coordinate.
    GaussianIso,
}

/// A noise distribution: family, scalar scale, and ambient dimension.
/// Immutable after construction; sampling takes an explicit seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    family: NoiseFamily,
    scale: f64,
    dim: usize,
}

impl NoiseModel {
    pub fn new(family: NoiseFamily, scale: f64, dim: usize) -> Result<Self> {
        if scale.is_nan() || scale <= 0.0 || !scale.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise scale must be positive and finite, got {scale}"
            )));
        }
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "noise dimension must be >= 1".into(),
            ));
        }
        Ok(Self { family, scale, dim })
    }

    /// `None` when the stage is inactive (scale 0), i.e. the identity stage.
    pub fn maybe(family: NoiseFamily, scale: f64, dim: usize) -> Result<Option<Self>> {
        if scale == 0.0 {
            Ok(None)
        } else {
            Self::new(family, scale, dim).map(Some)
        }
    }

    pub fn family(&self) -> NoiseFamily {
        self.family
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Density at `x`.
    pub fn pdf(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        let n = norm(x);
        Ok(match self.family {
            NoiseFamily::UniformBall => {
                if n <= self.scale {
                    1.0 / ball_volume(self.dim, self.scale)
                } else {
                    0.0
                }
            }
            NoiseFamily::GaussianIso => {
                let d = self.dim as f64;
                let var = self.scale * self.scale;
                (-(n * n) / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).powf(d / 2.0)
            }
        })
    }

    /// `n` i.i.d. draws, deterministic given `seed`.
    pub fn sample(&self, seed: u64, n: usize) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = vec![vec![0.0; self.dim]; n];
        for row in &mut out {
            self.sample_one(&mut rng, row);
        }
        out
    }

    /// One draw into a caller-provided buffer, for allocation-free loops.
    pub fn sample_one<R: rand::Rng>(&self, rng: &mut R, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.dim);
        match self.family {
            NoiseFamily::UniformBall => loop {
                for v in out.iter_mut() {
                    *v = standard_normal(rng);
                }
                let n = norm(out);
                if n > 1e-150 {
                    let u: f64 = rng.random();
                    let r = self.scale * u.powf(1.0 / self.dim as f64) / n;
                    for v in out.iter_mut() {
                        *v *= r;
                    }
                    break;
                }
            },
            NoiseFamily::GaussianIso => {
                for v in out.iter_mut() {
                    *v = self.scale * standard_normal(rng);
                }
            }
        }
    }

    /// Shifted CDF Φ_θ(r, x): the noise mass inside the ball B(x, r).
    ///
    /// Closed form in every supported configuration: interval overlap for
    /// d = 1, lens area for the 2D uniform ball, two-cap intersection volume
    /// for the uniform ball in d >= 3, and the noncentral chi-squared series
    /// for the Gaussian in any dimension. A seeded Monte-Carlo fallback
    /// covers uniform-ball configurations where the cap formula degenerates
    /// numerically; [`shifted_cdf_method`](Self::shifted_cdf_method) reports
    /// which route produced the value.
    pub fn shifted_cdf(&self, r: f64, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        if r < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "radius must be nonnegative, got {r}"
            )));
        }
        Ok(self.shifted_cdf_radial(r, norm(x)).0)
    }

    /// As [`shifted_cdf`](Self::shifted_cdf), also reporting the evaluation route.
    pub fn shifted_cdf_method(&self, r: f64, x: &[f64]) -> Result<(f64, CdfMethod)> {
        self.check_dim(x)?;
        if r < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "radius must be nonnegative, got {r}"
            )));
        }
        Ok(self.shifted_cdf_radial(r, norm(x)))
    }

    /// Radial form of the shifted CDF; `t` is the norm of the shift.
    pub(crate) fn shifted_cdf_radial(&self, r: f64, t: f64) -> (f64, CdfMethod) {
        if r == 0.0 {
            return (0.0, CdfMethod::Exact);
        }
        match self.family {
            NoiseFamily::UniformBall => {
                let th = self.scale;
                let v = match self.dim {
                    1 => overlap_len(t - r, t + r, -th, th) / (2.0 * th),
                    2 => lens_area(th, r, t) / (std::f64::consts::PI * th * th),
                    d => balls_intersection_volume(d, th, r, t) / ball_volume(d, th),
                };
                if v.is_finite() && (-1e-9..=1.0 + 1e-9).contains(&v) {
                    (v.clamp(0.0, 1.0), CdfMethod::Exact)
                } else {
                    (self.shifted_cdf_mc(r, t), CdfMethod::MonteCarloFallback)
                }
            }
            NoiseFamily::GaussianIso => {
                let s2 = self.scale * self.scale;
                let lambda = t * t / s2;
                (
                    noncentral_chi2_cdf(self.dim as f64, lambda, r * r / s2),
                    CdfMethod::Exact,
                )
            }
        }
    }

    /// Seeded Monte-Carlo estimate of Φ_θ(r, t·e1); only used as a fallback.
    fn shifted_cdf_mc(&self, r: f64, t: f64) -> f64 {
        let n = 1_000_000usize;
        let mut x = vec![0.0; self.dim];
        x[0] = t;
        let hits = self
            .sample(0x5f0e_cafe, n)
            .iter()
            .filter(|v| crate::geometry::dist(v, &x) <= r)
            .count();
        hits as f64 / n as f64
    }

    /// Norm inverse A_{θ,r}(c): the largest ‖x‖ with Φ_θ(r, x) >= c, found by
    /// bisection using the monotonicity of Φ in the argument norm.
    ///
    /// Errors with [`Error::PartitionVanishes`] when `c` exceeds the peak
    /// Φ_θ(r, 0); callers map that onto a zero shrunk radius.
    pub fn norm_inverse(&self, r: f64, c: f64) -> Result<f64> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "level must be in (0, 1], got {c}"
            )));
        }
        if r < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "radius must be nonnegative, got {r}"
            )));
        }
        let peak = self.shifted_cdf_radial(r, 0.0).0;
        if c > peak {
            return Err(Error::PartitionVanishes { level: c, peak });
        }
        let mut hi = match self.family {
            NoiseFamily::UniformBall => r + self.scale + 1.0,
            NoiseFamily::GaussianIso => r + 8.0 * self.scale,
        };
        while self.shifted_cdf_radial(r, hi).0 >= c {
            hi *= 2.0;
            if hi > 1e12 {
                return Err(Error::InvalidParameter(
                    "norm inverse bracket failed to close".into(),
                ));
            }
        }
        Ok(bisect_largest_at_least(
            |t| self.shifted_cdf_radial(r, t).0,
            c,
            0.0,
            hi,
        ))
    }

    /// Ψ_θ(t): CDF of ‖z‖² for z drawn from the noise.
    pub fn sqnorm_cdf(&self, t: f64) -> Result<f64> {
        if t < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "argument must be nonnegative, got {t}"
            )));
        }
        Ok(match self.family {
            NoiseFamily::UniformBall => (t.sqrt() / self.scale).powi(self.dim as i32).min(1.0),
            NoiseFamily::GaussianIso => chi2_cdf(self.dim as f64, t / (self.scale * self.scale)),
        })
    }

    /// Ψ_θ⁻¹(c). For the Gaussian family Ψ⁻¹(1) is infinite, which propagates
    /// through the positive-part clipping in bound computations.
    pub fn sqnorm_cdf_inv(&self, c: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::InvalidParameter(format!(
                "level must be in [0, 1], got {c}"
            )));
        }
        Ok(match self.family {
            NoiseFamily::UniformBall => self.scale * self.scale * c.powf(2.0 / self.dim as f64),
            NoiseFamily::GaussianIso => self.scale * self.scale * chi2_quantile(self.dim as f64, c),
        })
    }
}

/// How a shifted-CDF value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdfMethod {
    Exact,
    MonteCarloFallback,
}

/// Norm inverse through an optional stage: an absent model is the identity
/// stage, whose shifted CDF is the ball indicator, so the inverse is `r`
/// itself whenever the level is feasible.
pub fn norm_inverse_opt(model: Option<&NoiseModel>, r: f64, c: f64) -> Result<f64> {
    match model {
        Some(m) => m.norm_inverse(r, c),
        None => {
            if c <= 1.0 {
                Ok(r)
            } else {
                Err(Error::PartitionVanishes {
                    level: c,
                    peak: 1.0,
                })
            }
        }
    }
}

/// √Ψ⁻¹(c) through an optional stage; an absent model contributes zero.
pub fn sqrt_sqnorm_quantile_opt(model: Option<&NoiseModel>, c: f64) -> Result<f64> {
    match model {
        Some(m) => Ok(m.sqnorm_cdf_inv(c)?.sqrt()),
        None => Ok(0.0),
    }
}
