use std::f64::INFINITY;

use super::conjugates::{fp_star, lambda_q_star};
use super::handle::RateFunction;
use super::scale::{inf_scale, Grid, ScaleDomain, WIDE};
use super::closed::{gaussian_abs_moment, mp};
use crate::convexkit::{legendre_1d, Fn1D};
use crate::error::{invalid, Result};

/// Cramér rate of `X₁²` evaluated at `x²`, from the log-MGF of `X₁²`.
pub fn rate_product<F: Fn(f64) -> f64>(log_mgf_square: &Fn1D<F>, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Ok(INFINITY);
    }
    Ok(legendre_1d(log_mgf_square, x * x)?.max(0.0))
}

/// Rate of `‖X‖₂/√n` for the uniform law on `n^{1/p} B_p^n`.
///
/// For `p < 2` this is the `x^p/p` rate at speed `n^{p/2}`; for `p ≥ 2` the speed is `n`.
pub fn rate_lp_norm(p: f64, x: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(invalid(format!("p must be at least 1, got {p}")));
    }
    if x.is_nan() {
        return Ok(INFINITY);
    }
    if p < 2.0 {
        return Ok(if x >= 0.0 { x.powf(p) / p } else { INFINITY });
    }
    if p == 2.0 {
        return Ok(if x > 0.0 && x <= 1.0 { -x.ln() } else { INFINITY });
    }
    if !(x > 0.0 && x < 1.0) {
        return Ok(INFINITY);
    }
    let x2 = x * x;
    // Both terms increase in y beyond the second moment of f_p.
    let top = mp(p).powi(2);
    if x2 >= top {
        return fp_star(p, x2).map(|v| v.max(0.0));
    }
    let obj = |c: f64| {
        let y = x2 + (top - x2) * c;
        0.5 * (y / x2).ln() + fp_star(p, y).unwrap_or(INFINITY)
    };
    let grid = Grid { lo: -30.0, hi: 30.0, step: 0.5 };
    let v = inf_scale(&obj, ScaleDomain::Unit, grid).min(obj(0.0)).min(obj(1.0));
    Ok(v.max(0.0))
}

/// Variant of the constant-regime formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantVariant {
    /// `inf_{0<c<1} { J(x/c) - ½ log(1 - c²) }` (speed `n`).
    AStar,
    /// `inf_{c>0} { J(x/c) + c²/2 }` (speed `s_n ≪ n`).
    B,
}

fn degenerate_scale(jx: &RateFunction, x: f64) -> Option<f64> {
    jx.degenerate_at().map(|m| if m > 0.0 { x / m } else { INFINITY })
}

/// Rate of the norm of a projection onto a fixed number of directions.
pub fn rate_constant_regime(jx: &RateFunction, variant: ConstantVariant, xnorm: f64) -> f64 {
    if !(xnorm >= 0.0) {
        return INFINITY;
    }
    if xnorm == 0.0 {
        return 0.0;
    }
    let obj = |c: f64| match variant {
        ConstantVariant::AStar if !(c > 0.0 && c < 1.0) => INFINITY,
        ConstantVariant::AStar => jx.eval(xnorm / c) - 0.5 * (-c * c).ln_1p(),
        ConstantVariant::B => jx.eval(xnorm / c) + 0.5 * c * c,
    };
    if let Some(c) = degenerate_scale(jx, xnorm) {
        return obj(c).max(0.0);
    }
    let dom = match variant {
        ConstantVariant::AStar => ScaleDomain::Unit,
        ConstantVariant::B => ScaleDomain::Positive,
    };
    inf_scale(&obj, dom, WIDE).max(0.0)
}

/// Sublinear-regime norm formula, selected by the relation between `s_n` and `k_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SublinearNormCase {
    /// Speed `n`: `inf_{0<c<1} { -½ log(1-c²) + J(x/c) }`.
    AStar,
    /// `s_n / k_n → 0`: `J(x)`.
    R0,
    /// `s_n / k_n → r ∈ (0, ∞)`: `inf_{c>0} { (c²-1)/2 - log c + r J(√r x / c) }`.
    RPos(f64),
    /// `s_n / k_n → ∞`: `inf_{c>0} { c²/2 + J(x/c) }`.
    RInf,
}

pub fn rate_sublinear_norm(case: SublinearNormCase, jx: &RateFunction, x: f64) -> f64 {
    if !(x >= 0.0) {
        return INFINITY;
    }
    match case {
        SublinearNormCase::AStar => rate_constant_regime(jx, ConstantVariant::AStar, x),
        SublinearNormCase::R0 => jx.eval(x).max(0.0),
        SublinearNormCase::RInf => rate_constant_regime(jx, ConstantVariant::B, x),
        SublinearNormCase::RPos(r) => {
            if !(r > 0.0 && r.is_finite()) {
                return INFINITY;
            }
            let a = r.sqrt() * x;
            let obj = |c: f64| 0.5 * (c * c - 1.0) - c.ln() + r * jx.eval(a / c);
            if x == 0.0 {
                return (r * jx.eval(0.0)).max(0.0);
            }
            if let Some(c) = degenerate_scale(jx, a) {
                return obj(c).max(0.0);
            }
            inf_scale(&obj, ScaleDomain::Positive, WIDE).max(0.0)
        }
    }
}

/// How `s_n` compares with `k_n` for the `k_n^{-1/q}`-scaled norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeedCase {
    /// `s_n ≫ k_n`.
    Fast,
    /// `s_n = k_n`.
    Balanced,
    /// `s_n ≪ k_n`.
    Slow,
}

/// Rate of `k_n^{-1/q} ‖AᵀX‖_q` in the sublinear regime, at speed `min(s_n, k_n)`.
pub fn rate_sublinear_qnorm(q: f64, case: SpeedCase, jx: &RateFunction, m: f64, x: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&q) {
        return Err(invalid(format!("q must lie in [1, 2], got {q}")));
    }
    if !(m > 0.0) {
        return Err(invalid(format!("m must be positive, got {m}")));
    }
    if !(x >= 0.0) {
        return Ok(INFINITY);
    }
    Ok(match case {
        SpeedCase::Fast => lambda_q_star(q, (x / m).powf(q))?,
        SpeedCase::Slow => jx.eval(x / gaussian_abs_moment(q).powf(1.0 / q)),
        SpeedCase::Balanced => {
            let obj = |c: f64| {
                let j = jx.eval(x / c);
                if j == INFINITY {
                    return INFINITY;
                }
                j + lambda_q_star(q, c.powf(q)).unwrap_or(INFINITY)
            };
            if x == 0.0 {
                0.0
            } else if let Some(c) = degenerate_scale(jx, x) {
                obj(c)
            } else {
                inf_scale(&obj, ScaleDomain::Positive, Grid { lo: -16.0, hi: 16.0, step: 0.5 })
            }
        }
    }
    .max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratefn::{chi_square_rate, rate_lp_projection, LpProjectionCase};

    fn neg_log() -> RateFunction {
        RateFunction::closed_form("-log", Some(1.0), |x| if x > 0.0 && x <= 1.0 { -x.ln() } else { INFINITY })
    }

    fn power(p: f64) -> RateFunction {
        RateFunction::closed_form("x^p/p", Some(0.0), move |x| if x >= 0.0 { x.powf(p) / p } else { INFINITY })
    }

    #[test]
    fn product_examples() {
        let chi = Fn1D::new(|t: f64| -0.5 * (1.0 - 2.0 * t).ln(), crate::convexkit::Interval::below(0.5));
        assert!(rate_product(&chi, 1.0).unwrap().abs() < 1e-9);
        let v = rate_product(&chi, 2f64.sqrt()).unwrap();
        assert!((v - (0.5 - 0.5 * 2f64.ln())).abs() < 1e-9);
        let point = Fn1D::new(|t: f64| t, crate::convexkit::Interval::REAL);
        assert!(rate_product(&point, 1.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn lp_norm_examples() {
        assert!((rate_lp_norm(1.0, 2.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(rate_lp_norm(2.0, 1.0).unwrap(), 0.0);
        assert!((rate_lp_norm(2.0, 0.5).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(rate_lp_norm(4.0, mp(4.0)).unwrap() < 1e-6);
        assert!(rate_lp_norm(4.0, 0.6 * mp(4.0)).unwrap() > 1e-3);
        assert_eq!(rate_lp_norm(4.0, 1.0).unwrap(), INFINITY);
        assert!(rate_lp_norm(0.5, 1.0).is_err());
    }

    #[test]
    fn constant_regime_examples() {
        assert!((rate_constant_regime(&power(1.0), ConstantVariant::B, 1.0) - 1.5).abs() < 1e-9);
        let v = rate_constant_regime(&neg_log(), ConstantVariant::AStar, 0.5);
        assert!((v + 0.5 * 0.75f64.ln()).abs() < 1e-9);
        assert_eq!(rate_constant_regime(&power(1.0), ConstantVariant::B, 0.0), 0.0);
        for p in [1.0, 1.5] {
            for x in [0.5, 1.0, 2.0] {
                let v = rate_constant_regime(&power(p), ConstantVariant::B, x);
                let (w, _) = rate_lp_projection(p, LpProjectionCase::Constant, x).unwrap();
                assert!((v - w).abs() < 1e-6, "p={p} x={x}");
            }
        }
        let d = RateFunction::degenerate(1.0);
        assert!((rate_constant_regime(&d, ConstantVariant::AStar, 0.5) + 0.5 * 0.75f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn sublinear_norm_examples() {
        assert!((rate_sublinear_norm(SublinearNormCase::R0, &power(1.0), 3.0) - 3.0).abs() < 1e-15);
        let v = rate_sublinear_norm(SublinearNormCase::RPos(1.0), &power(1.0), 6.0);
        assert!((v - (4.5 - 2f64.ln())).abs() < 1e-9);
        assert!((rate_sublinear_norm(SublinearNormCase::RInf, &power(1.0), 1.0) - 1.5).abs() < 1e-9);
    }

    #[test]
    fn sublinear_qnorm_examples() {
        let id = RateFunction::degenerate(1.0);
        assert!(rate_sublinear_qnorm(2.0, SpeedCase::Fast, &id, 1.0, 1.0).unwrap() < 1e-10);
        let v = rate_sublinear_qnorm(2.0, SpeedCase::Fast, &id, 1.0, 2f64.sqrt()).unwrap();
        assert!((v - chi_square_rate(2.0)).abs() < 1e-8);
        let x = gaussian_abs_moment(1.0) * 0.9;
        let v = rate_sublinear_qnorm(1.0, SpeedCase::Slow, &neg_log(), 1.0, x).unwrap();
        assert!((v + 0.9f64.ln()).abs() < 1e-12);
        for x in [0.8, 1.0, 1.5] {
            let v = rate_sublinear_qnorm(2.0, SpeedCase::Fast, &id, 1.0, x).unwrap();
            assert!((v - chi_square_rate(x * x)).abs() < 1e-8);
        }
        // Degenerate J forces c = x / m.
        let v = rate_sublinear_qnorm(2.0, SpeedCase::Balanced, &id, 1.0, 1.2).unwrap();
        assert!((v - chi_square_rate(1.44)).abs() < 1e-8);
    }
}
