//! Large deviations of random projections of high-dimensional random vectors.
//!
//! The crate evaluates rate functions for norms and empirical measures of
//! `AᵀX`, where `A` is a Haar-distributed `n × k` frame and `X` is drawn from
//! an ℓ_p or Orlicz ball, a product measure or a Gaussian mixture, and checks
//! them against Monte Carlo tail estimates.

pub mod convexkit;
pub mod distributions;
pub mod error;
pub mod mc;
pub mod orlicz;
pub mod ratefn;
pub mod special;
pub mod stiefel;
pub mod tolerances;

pub use error::{Error, Result};
