//! Numerical machinery shared across the crate: chi-squared and noncentral
//! chi-squared CDFs, quantile inversion by bisection, ball and cap volumes,
//! and binomial confidence intervals.
//!
//! All quantile inverses use plain bisection with an absolute tolerance of
//! [`QUANTILE_TOL`] on the argument, so their error is far below the
//! Monte-Carlo noise of anything they feed into.

use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::beta::beta_reg;
use statrs::function::gamma::{gamma_lr, ln_gamma};

/// Absolute bisection tolerance on the argument for every quantile inverse.
pub const QUANTILE_TOL: f64 = 1e-10;
/// Iteration cap for bisections.
pub const QUANTILE_MAX_ITERS: usize = 200;

const PI: f64 = std::f64::consts::PI;

/// SplitMix64 step, used to derive independent seeds.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a base seed with a sequence of indices into one derived seed, so that
/// per-cell and per-point RNG streams are independent of evaluation order.
pub fn mix_seed(base: u64, parts: &[u64]) -> u64 {
    let mut s = splitmix64(base ^ 0xd1b5_4a32_d192_ed03);
    for &p in parts {
        s = splitmix64(s ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    }
    s
}

/// Derives a seed from the bit pattern of a point, so Monte-Carlo classifiers
/// evaluate deterministically at a given point regardless of call order.
pub fn seed_from_point(base: u64, x: &[f64]) -> u64 {
    let mut s = splitmix64(base ^ 0xa076_1d64_78bd_642f);
    for &c in x {
        s = splitmix64(s ^ c.to_bits());
    }
    s
}

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("standard normal")
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    std_normal().cdf(x)
}

/// Standard normal quantile, by bisection on the CDF.
pub fn normal_quantile(p: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "probability out of range: {p}");
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    bisect_quantile(normal_cdf, p, -41.0, 41.0)
}

/// Two-sided z value for a `conf` normal confidence interval (e.g. 0.99).
pub fn normal_ci_z(conf: f64) -> f64 {
    normal_quantile(0.5 + conf / 2.0)
}

/// Chi-squared CDF with `dof` degrees of freedom.
pub fn chi2_cdf(dof: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        gamma_lr(dof / 2.0, x / 2.0)
    }
}

/// Chi-squared quantile by bisection; returns infinity at p = 1.
pub fn chi2_quantile(dof: f64, p: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "probability out of range: {p}");
    if p == 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    let mut hi = dof + 10.0;
    while chi2_cdf(dof, hi) < p {
        hi *= 2.0;
        if hi > 1e300 {
            return f64::INFINITY;
        }
    }
    bisect_quantile(|t| chi2_cdf(dof, t), p, 0.0, hi)
}

/// Noncentral chi-squared CDF with `dof` degrees of freedom and
/// noncentrality `lambda`, evaluated at `x`.
///
/// Series over Poisson-weighted central chi-squared CDFs, summed outward from
/// the Poisson mode so large noncentralities stay in range.
pub fn noncentral_chi2_cdf(dof: f64, lambda: f64, x: f64) -> f64 {
    assert!(lambda >= 0.0 && dof > 0.0);
    if x <= 0.0 {
        return 0.0;
    }
    if lambda < 1e-14 {
        return chi2_cdf(dof, x);
    }
    let half = lambda / 2.0;
    let xh = x / 2.0;
    let j0 = half.floor();

    // F(j) = gamma_lr(dof/2 + j, x/2); stepping term t(j) satisfies
    // F(j + 1) = F(j) - t(j) with t(j) = (x/2)^(dof/2 + j) e^(-x/2) / Γ(dof/2 + j + 1).
    let f0 = gamma_lr(dof / 2.0 + j0, xh);
    let ln_w0 = -half + j0 * half.ln() - ln_gamma(j0 + 1.0);
    let w0 = ln_w0.exp();
    let ln_t0 = (dof / 2.0 + j0) * xh.ln() - xh - ln_gamma(dof / 2.0 + j0 + 1.0);
    let t0 = ln_t0.exp();

    let mut sum = w0 * f0;
    let mut cum_w = w0;

    // Downward from the mode.
    let mut w = w0;
    let mut f = f0;
    let mut t = t0;
    let mut j = j0;
    while j >= 1.0 {
        // t(j-1) = t(j) * (dof/2 + j) / (x/2); F(j-1) = F(j) + t(j-1).
        t *= (dof / 2.0 + j) / xh;
        f += t;
        w *= j / half;
        j -= 1.0;
        sum += w * f.min(1.0);
        cum_w += w;
        if w < 1e-18 {
            break;
        }
    }

    // Upward from the mode.
    let mut w = w0;
    let mut f = f0;
    let mut t = t0;
    let mut j = j0;
    for _ in 0..200_000 {
        // F(j+1) = F(j) - t(j); then advance t.
        f -= t;
        t *= xh / (dof / 2.0 + j + 1.0);
        j += 1.0;
        w *= half / j;
        if f < 0.0 {
            f = 0.0;
        }
        sum += w * f;
        cum_w += w;
        // The omitted tail is at most (1 - cum_w) * F(current).
        if (1.0 - cum_w) * f < 1e-15 || w < 1e-18 && j > half {
            break;
        }
    }

    sum.clamp(0.0, 1.0)
}

/// Volume of the d-dimensional Euclidean ball of radius `r`.
pub fn ball_volume(dim: usize, r: f64) -> f64 {
    let d = dim as f64;
    ((d / 2.0) * PI.ln() - ln_gamma(d / 2.0 + 1.0)).exp() * r.powi(dim as i32)
}

/// Volume of the cap `{ x in B(0, r) : x_1 >= t }` for signed distance `t`.
///
/// Uses the regularized incomplete beta function; valid for any dimension.
pub fn cap_volume(dim: usize, r: f64, t: f64) -> f64 {
    if t >= r {
        return 0.0;
    }
    if t <= -r {
        return ball_volume(dim, r);
    }
    if t < 0.0 {
        return ball_volume(dim, r) - cap_volume(dim, r, -t);
    }
    let d = dim as f64;
    let x = (1.0 - (t / r) * (t / r)).clamp(0.0, 1.0);
    0.5 * ball_volume(dim, r) * beta_reg((d + 1.0) / 2.0, 0.5, x)
}

/// Volume of `B(0, r1) ∩ B(c·e1, r2)` in `dim` dimensions.
pub fn balls_intersection_volume(dim: usize, r1: f64, r2: f64, c: f64) -> f64 {
    let c = c.abs();
    if c >= r1 + r2 {
        return 0.0;
    }
    if c <= (r1 - r2).abs() {
        return ball_volume(dim, r1.min(r2));
    }
    // Separating plane at x1 = a; each ball contributes the cap beyond it.
    let a = (c * c + r1 * r1 - r2 * r2) / (2.0 * c);
    cap_volume(dim, r1, a) + cap_volume(dim, r2, c - a)
}

/// Area of the intersection of two disks (radii `r1`, `r2`, center distance `c`).
pub fn lens_area(r1: f64, r2: f64, c: f64) -> f64 {
    let c = c.abs();
    if c >= r1 + r2 {
        return 0.0;
    }
    if c <= (r1 - r2).abs() {
        let r = r1.min(r2);
        return PI * r * r;
    }
    let a1 = ((c * c + r1 * r1 - r2 * r2) / (2.0 * c * r1)).clamp(-1.0, 1.0);
    let a2 = ((c * c + r2 * r2 - r1 * r1) / (2.0 * c * r2)).clamp(-1.0, 1.0);
    let k = (-c + r1 + r2) * (c + r1 - r2) * (c - r1 + r2) * (c + r1 + r2);
    r1 * r1 * a1.acos() + r2 * r2 * a2.acos() - 0.5 * k.max(0.0).sqrt()
}

/// Length of the overlap of `[lo1, hi1]` and `[lo2, hi2]`.
pub fn overlap_len(lo1: f64, hi1: f64, lo2: f64, hi2: f64) -> f64 {
    (hi1.min(hi2) - lo1.max(lo2)).max(0.0)
}

/// Clopper–Pearson interval for `k` successes out of `n` at confidence `conf`.
pub fn clopper_pearson(k: u64, n: u64, conf: f64) -> (f64, f64) {
    assert!(n > 0 && k <= n);
    let alpha = 1.0 - conf;
    let lo = if k == 0 {
        0.0
    } else {
        beta_quantile(alpha / 2.0, k as f64, (n - k + 1) as f64)
    };
    let hi = if k == n {
        1.0
    } else {
        beta_quantile(1.0 - alpha / 2.0, (k + 1) as f64, (n - k) as f64)
    };
    (lo, hi)
}

/// Beta distribution quantile by bisection on the regularized incomplete beta.
pub fn beta_quantile(p: f64, a: f64, b: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p));
    if p == 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return 1.0;
    }
    bisect_quantile(|x| beta_reg(a, b, x.clamp(0.0, 1.0)), p, 0.0, 1.0)
}

/// Smallest `t` with `f(t) >= p` for a non-decreasing `f`, assuming
/// `f(lo) < p <= f(hi)`; plain bisection to [`QUANTILE_TOL`].
pub fn bisect_quantile(f: impl Fn(f64) -> f64, p: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..QUANTILE_MAX_ITERS {
        if hi - lo < QUANTILE_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) >= p {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Largest `t` in `[lo, hi]` with `f(t) >= c` for a non-increasing `f`,
/// assuming `f(lo) >= c` and `f(hi) < c`.
pub fn bisect_largest_at_least(f: impl Fn(f64) -> f64, c: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..QUANTILE_MAX_ITERS {
        if hi - lo < QUANTILE_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) >= c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
