use std::f64::INFINITY;

use super::closed::{chi_square_rate, gaussian_abs_moment, gaussian_ratio_rate};
use super::conjugates::lambda_a_star;
use super::entropy::{entropy_h_lambda, relative_entropy_to_gaussian, MeasureArg};
use super::handle::RateFunction;
use super::norms::SpeedCase;
use super::scale::{inf_scale, Grid, ScaleDomain, WIDE};
use crate::convexkit::brent_bounded;
use crate::error::{invalid, Result};

/// Which speed applies in the linear regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearCase {
    /// `s_n = n`.
    Full,
    /// `s_n ≪ n`.
    Slow,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("λ must lie in (0, 1], got {lambda}")))
    }
}

fn gaussian_only(jx: &RateFunction, nu: &MeasureArg) -> f64 {
    match nu {
        MeasureArg::Gaussian(s) => jx.eval(*s),
        MeasureArg::Histogram(_) => INFINITY,
    }
}

/// Rate of the empirical measure of the projected coordinates for sublinear `k_n`.
pub fn rate_sublinear_empirical(case: SpeedCase, jx: &RateFunction, m: f64, nu: &MeasureArg) -> Result<f64> {
    if !(m > 0.0) {
        return Err(invalid(format!("m must be positive, got {m}")));
    }
    nu.validate()?;
    Ok(match case {
        SpeedCase::Fast => relative_entropy_to_gaussian(nu, m),
        SpeedCase::Slow => gaussian_only(jx, nu),
        SpeedCase::Balanced => {
            let obj = |c: f64| {
                let j = jx.eval(c);
                if j == INFINITY {
                    INFINITY
                } else {
                    relative_entropy_to_gaussian(nu, c) + j
                }
            };
            match jx.degenerate_at() {
                Some(c) => obj(c),
                None => inf_scale(&obj, ScaleDomain::Positive, WIDE),
            }
        }
    }
    .max(0.0))
}

/// Rate of the empirical measure of the projected coordinates for `k_n ~ λ n`.
///
/// Histogram arguments give an upper bound subject to their binning.
pub fn rate_linear_empirical(lambda: f64, jx: &RateFunction, case: LinearCase, mu: &MeasureArg) -> Result<f64> {
    check_lambda(lambda)?;
    mu.validate()?;
    Ok(match case {
        LinearCase::Slow => gaussian_only(jx, mu),
        LinearCase::Full => {
            let obj = |c: f64| {
                let j = jx.eval(c);
                if j == INFINITY {
                    INFINITY
                } else {
                    entropy_h_lambda(lambda, &mu.scaled(c)) + j
                }
            };
            match jx.degenerate_at() {
                Some(c) => obj(c),
                None => inf_scale(&obj, ScaleDomain::Positive, WIDE),
            }
        }
    }
    .max(0.0))
}

/// Rate of `n^{1/2-1/q} ‖ζ^{(k_n)}‖_q / ‖ζ^{(n)}‖₂` for `k_n ~ λ n` and i.i.d. standard Gaussians `ζ`.
pub fn rate_j_q_lambda(q: f64, lambda: f64, z: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&q) {
        return Err(invalid(format!("q must lie in [1, 2], got {q}")));
    }
    check_lambda(lambda)?;
    if q == 2.0 {
        return Ok(gaussian_ratio_rate(lambda, z));
    }
    if !(z > 0.0) {
        return Ok(INFINITY);
    }
    let zq = z.powf(q);
    let grid = Grid { lo: -12.0, hi: 6.0, step: 0.5 };
    if lambda == 1.0 {
        let obj = |s: f64| lambda_a_star(q, zq * s.powf(q / 2.0), s).unwrap_or(INFINITY);
        return Ok(inf_scale(&obj, ScaleDomain::Positive, grid).max(0.0));
    }
    // Outer total second moment S = x₂ + x₃, inner split x₂.
    let inner = |s: f64| {
        let x1 = zq * s.powf(q / 2.0);
        let lo = z * z * s * lambda.powf(1.0 - 2.0 / q);
        if !(lo < s) {
            return INFINITY;
        }
        let f = |x2: f64| {
            if !(x2 > lo && x2 < s) {
                return INFINITY;
            }
            let a = lambda_a_star(q, x1 / lambda, x2 / lambda).unwrap_or(INFINITY);
            if a == INFINITY {
                return INFINITY;
            }
            lambda * a + (1.0 - lambda) * chi_square_rate((s - x2) / (1.0 - lambda))
        };
        brent_bounded(&f, lo, s, 1e-10 * s).1
    };
    Ok(inf_scale(&inner, ScaleDomain::Positive, grid).max(0.0))
}

/// Rate of `n^{-1/q} ‖AᵀX‖_q` for `k_n ~ λ n`.
pub fn rate_linear_qnorm(q: f64, lambda: f64, jx: &RateFunction, case: LinearCase, x: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&q) {
        return Err(invalid(format!("q must lie in [1, 2], got {q}")));
    }
    check_lambda(lambda)?;
    if !(x >= 0.0) {
        return Ok(INFINITY);
    }
    Ok(match case {
        LinearCase::Slow => jx.eval(x / (lambda * gaussian_abs_moment(q)).powf(1.0 / q)),
        LinearCase::Full => {
            if x == 0.0 {
                jx.eval(0.0)
            } else {
                let obj = |y: f64| {
                    let j = jx.eval(y);
                    if j == INFINITY {
                        return INFINITY;
                    }
                    j + rate_j_q_lambda(q, lambda, x / y).unwrap_or(INFINITY)
                };
                match jx.degenerate_at() {
                    Some(y) => obj(y),
                    None => {
                        let grid = if q == 2.0 { WIDE } else { Grid { lo: -8.0, hi: 8.0, step: 0.5 } };
                        inf_scale(&obj, ScaleDomain::Positive, grid)
                    }
                }
            }
        }
    }
    .max(0.0))
}
