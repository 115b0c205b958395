//! Exact and Monte-Carlo evaluation of randomized-smoothed classifiers over
//! analytically tractable data distributions.
//!
//! The crate models binary conditional distributions with structured positive
//! regions (disjoint ball unions, 1D piecewise-constant profiles), convolves
//! them with single-parameter spherical noise, pushes them through the
//! two-stage pipeline of noise-augmented training followed by randomized
//! smoothing, and computes benign risks, excess risks, shrinkage radii, and
//! universal excess-risk bounds — in closed form wherever the geometry
//! admits it and by seeded Monte Carlo elsewhere.

pub mod bounds;
pub mod classifiers;
pub mod error;
pub mod geometry;
pub mod noise;
pub mod numeric;
pub mod piecewise;
pub mod risk;
pub mod smoothing;

pub use error::{Error, Result};
