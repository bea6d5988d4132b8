use crate::convexkit::integrate_finite;
use crate::error::{invalid, Error, Result};
use crate::special::ln_gamma;

/// `P(n^{-1/2} |(AᵀX)₁| ≥ x)` for `X` uniform in `√n B₂ⁿ`.
///
/// `(AᵀX)₁ / √n = R · U^{1/n}` with `R² ~ Beta(1/2, (n-1)/2)`, so the tail is
/// `E[(1 - (x/|R|)^n)₊]`.
pub fn exact_tail_oracle_p2(n: usize, k: usize, x: f64) -> Result<f64> {
    if k != 1 {
        return Err(Error::Unsupported(format!("exact oracle covers k = 1 only, got k = {k}")));
    }
    if n == 0 {
        return Err(Error::InvalidDims { n, k });
    }
    if !(x >= 0.0) {
        return Err(invalid(format!("x must be non-negative, got {x}")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x >= 1.0 {
        return Ok(0.0);
    }
    if n == 1 {
        return Ok(1.0 - x);
    }
    let nf = n as f64;
    let x2 = x * x;
    let log_beta = ln_gamma(0.5) + ln_gamma((nf - 1.0) / 2.0) - ln_gamma(nf / 2.0);
    let log_c = 0.5 * (nf - 1.0) * (-x2).ln_1p() + 2f64.ln() - log_beta;
    // w = 1 - (1 - x²) v² maps [x², 1] onto v ∈ [0, 1] and absorbs the (1-w)^{-1/2} edge.
    let f = |v: f64| {
        if v <= 0.0 {
            return 0.0;
        }
        let w = 1.0 - (1.0 - x2) * v * v;
        let gap = -(0.5 * nf * (x2 / w).ln()).exp_m1();
        if gap <= 0.0 {
            return 0.0;
        }
        gap * (log_c + (nf - 2.0) * v.ln() - 0.5 * w.ln()).exp()
    };
    integrate_finite(f, 0.0, 1.0, 1e-12)
}

/// `P(|U^{1/n} - 1| ≥ ε) = (1-ε)^n`.
pub fn thin_shell_oracle_p2(n: usize, eps: f64) -> f64 {
    if eps <= 0.0 {
        1.0
    } else if eps >= 1.0 {
        0.0
    } else {
        (1.0 - eps).powi(n as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::beta_reg;

    #[test]
    fn edges() {
        assert_eq!(exact_tail_oracle_p2(40, 1, 0.0).unwrap(), 1.0);
        assert_eq!(exact_tail_oracle_p2(40, 1, 1.0).unwrap(), 0.0);
        assert!(matches!(exact_tail_oracle_p2(40, 2, 0.5), Err(Error::Unsupported(_))));
        assert_eq!(thin_shell_oracle_p2(20, 0.1), 0.9f64.powi(20));
    }

    #[test]
    fn bounded_by_beta_tail() {
        // Dropping U^{1/n} can only raise the tail.
        for n in [2, 5, 40] {
            for x in [0.1, 0.5, 0.9] {
                let p = exact_tail_oracle_p2(n, 1, x).unwrap();
                let upper = 1.0 - beta_reg(0.5, (n as f64 - 1.0) / 2.0, x * x);
                assert!(p > 0.0 && p < upper);
            }
        }
    }

    #[test]
    fn two_dimensional_closed_form() {
        // n = 2: R = |cos Θ|, so P = (2/π) ∫_0^{acos x} (1 - x²/cos²θ) dθ.
        let x: f64 = 0.3;
        let a = x.acos();
        let exact = 2.0 / std::f64::consts::PI * (a - x * x * a.tan());
        assert!((exact_tail_oracle_p2(2, 1, x).unwrap() - exact).abs() < 1e-12);
    }

    #[test]
    fn decay_matches_rate() {
        let p = exact_tail_oracle_p2(2000, 1, 0.5).unwrap();
        let r = -p.ln() / 2000.0;
        assert!((r - (-0.5 * 0.75f64.ln())).abs() < 1e-2);
    }
}
