//! Rejection sampler for disjoint sphere configurations with a prescribed
//! interference distance.

use anyhow::{bail, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use smoothlab_core::classifiers::BallUnionConditional;
use smoothlab_core::geometry::{dist, Ball, BoxDomain};

/// Acceptance slack keeping sampled configurations clear of the
/// constructor's disjointness tolerance.
const GAP_SLACK: f64 = 1e-9;

/// Samples ball centers uniformly in the domain, rejecting candidates within
/// `r` of the boundary and candidates closer than `zeta + 2r` to any
/// accepted center. Runs exactly `attempts` proposals.
pub fn sample_sphere_config(
    domain: &BoxDomain,
    zeta: f64,
    r: f64,
    attempts: usize,
    seed: u64,
    tau: f64,
) -> Result<BallUnionConditional> {
    if r.is_nan() || r <= 0.0 {
        bail!("sphere radius must be positive, got {r}");
    }
    if attempts == 0 {
        bail!("need at least one attempt");
    }
    if zeta < 0.0 {
        bail!("interference distance must be nonnegative, got {zeta}");
    }
    if domain
        .lo
        .iter()
        .zip(&domain.hi)
        .any(|(lo, hi)| hi - lo <= 2.0 * r)
    {
        bail!("domain too small to place a sphere of radius {r} away from the boundary");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers: Vec<Vec<f64>> = Vec::new();
    for _ in 0..attempts {
        let c = domain.sample(&mut rng);
        let clear_of_boundary = c
            .iter()
            .zip(domain.lo.iter().zip(&domain.hi))
            .all(|(v, (lo, hi))| v - r >= *lo && v + r <= *hi);
        if !clear_of_boundary {
            continue;
        }
        if centers
            .iter()
            .all(|c2| dist(&c, c2) > zeta + 2.0 * r + GAP_SLACK)
        {
            centers.push(c);
        }
    }
    if centers.is_empty() {
        bail!("no spheres accepted after {attempts} attempts");
    }
    let balls = centers
        .into_iter()
        .map(|c| Ball::new(c, r))
        .collect::<smoothlab_core::Result<Vec<_>>>()?;
    Ok(BallUnionConditional::new(balls, tau)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn domain() -> BoxDomain {
        BoxDomain::new(vec![0.0, 0.0], vec![100.0, 100.0]).unwrap()
    }

    #[test]
    fn accepted_configuration_respects_interference_distance() {
        for zeta in [0.0, 10.0, 20.0, 30.0] {
            let c = sample_sphere_config(&domain(), zeta, 10.0, 500, 7, 0.25).unwrap();
            if c.balls().len() >= 2 {
                assert!(c.lower_interference_distance().unwrap() >= zeta);
            }
        }
    }

    #[test]
    fn packing_bound_at_zero_interference() {
        // Centers are pairwise > 20 apart inside [10, 90]^2; a hexagonal
        // packing argument caps the count at 25.
        let c = sample_sphere_config(&domain(), 0.0, 10.0, 500, 13, 0.25).unwrap();
        assert!(c.balls().len() <= 25, "accepted {}", c.balls().len());
    }

    #[test]
    fn sampler_is_deterministic_and_stays_off_the_boundary() {
        let a = sample_sphere_config(&domain(), 10.0, 10.0, 500, 42, 0.25).unwrap();
        let b = sample_sphere_config(&domain(), 10.0, 10.0, 500, 42, 0.25).unwrap();
        assert_eq!(a.balls(), b.balls());
        for ball in a.balls() {
            for (c, (lo, hi)) in ball
                .center
                .iter()
                .zip([0.0, 0.0].iter().zip(&[100.0, 100.0]))
            {
                assert!(c - 10.0 >= *lo && c + 10.0 <= *hi);
            }
        }
    }

    #[test]
    fn impossible_domain_errors() {
        let tiny = BoxDomain::new(vec![0.0, 0.0], vec![5.0, 5.0]).unwrap();
        assert!(sample_sphere_config(&tiny, 0.0, 10.0, 10, 1, 0.25).is_err());
    }
}
