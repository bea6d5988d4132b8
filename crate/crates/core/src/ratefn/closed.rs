use std::f64::consts::PI;
use std::f64::INFINITY;

use crate::convexkit::find_root_bracketed;
use crate::error::{invalid, Result};
use crate::special::{gamma, ln_gamma};
use crate::tolerances::ROOT_TOL;

/// Speed `n^a · k_n^b` of an LDP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Speed {
    pub n_exp: f64,
    pub k_exp: f64,
}

impl Speed {
    pub const LINEAR: Speed = Speed { n_exp: 1.0, k_exp: 0.0 };

    pub fn n_pow(a: f64) -> Self {
        Speed { n_exp: a, k_exp: 0.0 }
    }

    pub fn eval(&self, n: f64, k: f64) -> f64 {
        let mut s = n.powf(self.n_exp);
        if self.k_exp != 0.0 {
            s *= k.powf(self.k_exp);
        }
        s
    }

    pub fn tag(&self) -> String {
        fn exp(a: f64) -> String {
            let s = format!("{a:.6}");
            let s = s.trim_end_matches('0').trim_end_matches('.');
            s.to_string()
        }
        let n = if self.n_exp == 1.0 { "n".to_string() } else { format!("n^{}", exp(self.n_exp)) };
        if self.k_exp == 0.0 {
            n
        } else {
            format!("{n}*k_n^{}", exp(self.k_exp))
        }
    }
}

/// Cramér rate of a `χ²₁` variable at `t`: `(t - 1)/2 - log(t)/2`.
pub fn chi_square_rate(t: f64) -> f64 {
    if t > 0.0 {
        (0.5 * (t - 1.0 - t.ln())).max(0.0)
    } else {
        INFINITY
    }
}

fn xlogy_ratio(a: f64, b: f64) -> f64 {
    // a·log(a/b) with 0·log(0/b) = 0 and 0·log(0/0) = 0.
    if a == 0.0 {
        0.0
    } else if b <= 0.0 {
        INFINITY
    } else {
        a * (a / b).ln()
    }
}

/// Rate of the ratio `‖ζ^{(k_n)}‖₂ / ‖ζ^{(n)}‖₂` for `k_n ~ λ n`.
///
/// For `λ = 1` the point `z = 1` is included, where the second term is `0·log(0/0) = 0`.
pub fn gaussian_ratio_rate(lambda: f64, z: f64) -> f64 {
    if !(lambda > 0.0 && lambda <= 1.0) || !(z > 0.0) {
        return INFINITY;
    }
    let z2 = z * z;
    if z2 > 1.0 || (z2 == 1.0 && lambda < 1.0) {
        return INFINITY;
    }
    let v = 0.5 * xlogy_ratio(lambda, z2) + 0.5 * xlogy_ratio(1.0 - lambda, 1.0 - z2);
    v.max(0.0)
}

/// `E|G|^q` for a standard Gaussian `G`.
pub fn gaussian_abs_moment(q: f64) -> f64 {
    2f64.powf(q / 2.0) * gamma((q + 1.0) / 2.0) / PI.sqrt()
}

/// Root mean square of the p-generalised normal law `∝ exp(-|x|^p / p)`.
pub fn mp(p: f64) -> f64 {
    let l = (2.0 / p) * p.ln() + ln_gamma(1.0 + 3.0 / p) - 3f64.ln() - ln_gamma(1.0 + 1.0 / p);
    (0.5 * l).exp()
}

/// `log ∫ exp(-|x|^p / p) dx`.
pub fn pgn_log_normaliser(p: f64) -> f64 {
    2f64.ln() + p.ln() / p + ln_gamma(1.0 + 1.0 / p)
}

/// Rate `t^{p/2}/p` of partial sums of squared p-generalised normals at sub-quadratic speed.
pub fn rate_pgn_partial_sum(p: f64, t: f64) -> f64 {
    if t >= 0.0 {
        t.powf(p / 2.0) / p
    } else {
        INFINITY
    }
}

/// Regime of the ℓ_p (p < 2) projection formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpProjectionCase {
    Constant,
    /// `k_n ≪ n^{2p/(2+p)}`.
    SubSlow,
    /// `k_n = n^{2p/(2+p)}`.
    SubCrit,
    /// `k_n ≫ n^{2p/(2+p)}`.
    SubFast,
}

/// Unique positive root of `c^{p+2} - c^p - x^p`.
///
/// It lies in `[(1 + x^p)^{1/(p+2)}, 1 + x^{p/(p+2)}]`.
pub fn lp_cbar(p: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(invalid("x must be non-negative"));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let xp = x.powf(p);
    let phi = |c: f64| c.powf(p + 2.0) - c.powf(p) - xp;
    let lo = (1.0 + xp).powf(1.0 / (p + 2.0));
    let hi = 1.0 + x.powf(p / (p + 2.0));
    find_root_bracketed(phi, lo, hi, ROOT_TOL)
}

/// Closed-form norm rates for uniform ℓ_p balls with `p ∈ [1, 2)`, with their speed.
pub fn rate_lp_projection(p: f64, case: LpProjectionCase, x: f64) -> Result<(f64, Speed)> {
    if !(1.0..2.0).contains(&p) {
        return Err(invalid(format!("p must lie in [1, 2), got {p}")));
    }
    let beta = 2.0 * p / (p + 2.0);
    let slow = Speed::n_pow(beta);
    if x < 0.0 {
        let s = if case == LpProjectionCase::SubFast { Speed { n_exp: p, k_exp: -p / 2.0 } } else { slow };
        return Ok((INFINITY, s));
    }
    let factor = (p + 2.0) / (2.0 * p);
    Ok(match case {
        LpProjectionCase::Constant | LpProjectionCase::SubSlow => (factor * x.powf(beta), slow),
        LpProjectionCase::SubCrit => {
            let c = lp_cbar(p, x)?;
            ((factor * x.powf(p) / c.powf(p) - c.ln()).max(0.0), slow)
        }
        LpProjectionCase::SubFast => (x.powf(p) / p, Speed { n_exp: p, k_exp: -p / 2.0 }),
    })
}
