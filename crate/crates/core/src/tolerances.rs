//! Numerical tolerances shared across the crate and its tests.
//!
//! Acceptance tolerances are the pinned values from the build contract; the
//! internal ones are what the solvers aim for so that the pinned values hold
//! with margin.

/// Relative accuracy requested from [`crate::convexkit::log_integral`].
pub const QUAD_TOL: f64 = 1e-12;
/// Argument tolerance for scalar minimisation and maximisation.
pub const ARG_TOL: f64 = 1e-11;
/// Default residual target for bracketed root finding.
pub const ROOT_TOL: f64 = 1e-13;

pub const ACC_CONSTANT_REGIME: f64 = 1e-6;
pub const ACC_CHI_SQUARE: f64 = 1e-8;
pub const ACC_LOG_VOLUME: f64 = 1e-6;
pub const ACC_ORLICZ_LP: f64 = 1e-4;
pub const ACC_ORLICZ_CENTER: f64 = 1e-6;
pub const ACC_ROOT_RESIDUAL: f64 = 1e-10;
pub const ACC_GAUSSIAN_FAMILY: f64 = 1e-8;
pub const ACC_JQ_LAMBDA_Q2: f64 = 1e-6;
pub const ACC_FRAME_ORTHO: f64 = 1e-10;
pub const ACC_RESCALED_REL: f64 = 0.25;
pub const ACC_W1_LARGE_N: f64 = 0.05;
/// Distance from a rate function's center at which it must be strictly positive.
pub const HANDLE_PROBE: f64 = 0.2;
/// Coverage level of the Clopper–Pearson intervals.
pub const CI_LEVEL: f64 = 0.99;
