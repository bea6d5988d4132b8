//! Closed-form and variational rate functions for norms and empirical
//! measures of random projections.

mod closed;
mod conjugates;
mod curve;
mod entropy;
mod handle;
mod linear;
mod norms;
mod scale;

pub use closed::{
    chi_square_rate, gaussian_abs_moment, gaussian_ratio_rate, lp_cbar, mp, pgn_log_normaliser,
    rate_lp_projection, rate_pgn_partial_sum, LpProjectionCase, Speed,
};
pub use conjugates::{fp_star, fp_star_solve, lambda_a_star, lambda_q_star, tilted_gaussian_logmgf, Conjugate2};
pub use curve::RateCurve;
pub use entropy::{entropy_h_lambda, relative_entropy_to_gaussian, Histogram, MeasureArg};
pub use handle::{RateFunction, RateKind};
pub use linear::{rate_j_q_lambda, rate_linear_empirical, rate_linear_qnorm, rate_sublinear_empirical, LinearCase};
pub use norms::{
    rate_constant_regime, rate_lp_norm, rate_product, rate_sublinear_norm, rate_sublinear_qnorm, ConstantVariant,
    SpeedCase, SublinearNormCase,
};
