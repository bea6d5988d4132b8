//! Numerical convex analysis: log-integrals, Legendre transforms, scalar and
//! planar optimisation and bracketed root finding.
//!
//! Functions are real-valued with `+inf` standing for points outside the
//! effective domain.

mod expfamily;
mod interval;
mod legendre;
mod optimize;
mod quad;

pub(crate) use expfamily::ExpFamily2;
pub use interval::{Fn1D, Interval};
pub use legendre::legendre_1d;
pub(crate) use optimize::brent_bounded;
pub use optimize::{find_root_bracketed, maximize_concave_2d, minimize_unimodal, Max2};
pub use quad::{gauss_legendre, integrate_finite, log_integral, log_integral_with_breaks, Moments2};
