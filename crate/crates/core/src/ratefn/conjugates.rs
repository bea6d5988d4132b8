use std::f64::consts::PI;
use std::f64::INFINITY;

use super::closed::{gaussian_abs_moment, pgn_log_normaliser};
use crate::convexkit::{legendre_1d, log_integral_with_breaks, ExpFamily2, Fn1D, Interval};
use crate::error::{invalid, Error, Result};
use crate::tolerances::QUAD_TOL;

fn check_q(q: f64) -> Result<()> {
    if (1.0..=2.0).contains(&q) {
        Ok(())
    } else {
        Err(invalid(format!("q must lie in [1, 2], got {q}")))
    }
}

fn tilted_finite(q: f64, t1: f64, t2: f64) -> bool {
    if q < 2.0 {
        t2 < 0.5
    } else {
        t1 + t2 < 0.5
    }
}

/// `log E exp(t1 |G|^q + t2 G²)` for a standard Gaussian `G`; `+inf` outside the
/// finiteness region.
pub fn tilted_gaussian_logmgf(q: f64, t1: f64, t2: f64) -> Result<f64> {
    check_q(q)?;
    if !tilted_finite(q, t1, t2) {
        return Ok(INFINITY);
    }
    let c = -0.5 * (2.0 * PI).ln();
    log_integral_with_breaks(
        |x: f64| c + t1 * x.abs().powf(q) + (t2 - 0.5) * x * x,
        Interval::REAL,
        &[0.0],
        QUAD_TOL,
    )
}

/// Legendre transform of `t ↦ log E exp(t |G|^q)`.
pub fn lambda_q_star(q: f64, y: f64) -> Result<f64> {
    check_q(q)?;
    let dom = if q < 2.0 { Interval::REAL } else { Interval::below(0.5) };
    let f = Fn1D::new(move |t: f64| tilted_gaussian_logmgf(q, t, 0.0).unwrap_or(INFINITY), dom);
    legendre_1d(&f, y)
}

/// Solution of the two-dimensional conjugate: value and maximising parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conjugate2 {
    pub value: f64,
    pub theta: [f64; 2],
}

/// `F_p^*(y) = sup_{t1,t2} { t1 y + t2 - log ∫ e^{t1 x² + t2 |x|^p} f_p(x) dx }` with its maximiser.
pub fn fp_star_solve(p: f64, y: f64) -> Result<Conjugate2> {
    if !(p > 2.0) {
        return Err(invalid(format!("p must exceed 2, got {p}")));
    }
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::Diverging(format!("y = {y} is outside the moment range (0, 1)")));
    }
    let lz = pgn_log_normaliser(p);
    // On t2 = 1/p the tilt is Gaussian; it is optimal while N(0, y) keeps E|x|^p ≤ 1.
    if gaussian_abs_moment(p) * y.powf(p / 2.0) <= 1.0 {
        let value = 1.0 / p - 0.5 + lz - 0.5 * (2.0 * PI * y).ln();
        return Ok(Conjugate2 { value: value.max(0.0), theta: [-0.5 / y, 1.0 / p] });
    }
    let base = move |x: f64| -x.abs().powf(p) / p - lz;
    let phi = move |x: f64| [x * x, x.abs().powf(p)];
    let feasible = move |t: [f64; 2]| t[1] < 1.0 / p;
    let fam = ExpFamily2 { base: &base, phi: &phi, domain: Interval::REAL, breaks: &[0.0], feasible: &feasible };
    let c = fam.conjugate([y, 1.0], [0.0, 0.0])?;
    Ok(Conjugate2 { value: c.value.max(0.0), theta: c.theta })
}

pub fn fp_star(p: f64, y: f64) -> Result<f64> {
    fp_star_solve(p, y).map(|c| c.value)
}

/// Conjugate of `(t1, t2) ↦ log E exp(t1 |G|^q + t2 G²)` at `(y1, y2)`.
pub fn lambda_a_star(q: f64, y1: f64, y2: f64) -> Result<f64> {
    check_q(q)?;
    if !(y1 > 0.0 && y2 > 0.0) {
        return Ok(INFINITY);
    }
    if q < 2.0 && y1 >= y2.powf(q / 2.0) {
        // Jensen: E|G|^q < (E G²)^{q/2} under any non-degenerate law.
        return Ok(INFINITY);
    }
    let c = -0.5 * (2.0 * PI).ln();
    let base = move |x: f64| c - 0.5 * x * x;
    let phi = move |x: f64| [x.abs().powf(q), x * x];
    let feasible = move |t: [f64; 2]| tilted_finite(q, t[0], t[1]);
    let fam = ExpFamily2 { base: &base, phi: &phi, domain: Interval::REAL, breaks: &[0.0], feasible: &feasible };
    match fam.conjugate([y1, y2], [0.0, 0.0]) {
        Ok(c) => Ok(c.value.max(0.0)),
        Err(Error::Diverging(_)) => Ok(INFINITY),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexkit::maximize_concave_2d;
    use crate::ratefn::{chi_square_rate, gaussian_abs_moment, mp};
    use crate::special::norm_cdf;

    #[test]
    fn tilted_logmgf_oracles() {
        assert!(tilted_gaussian_logmgf(1.3, 0.0, 0.0).unwrap().abs() < 1e-12);
        for q in [1.0, 1.5, 2.0] {
            for t in [-2.0, 0.2, 0.45] {
                let v = tilted_gaussian_logmgf(q, 0.0, t).unwrap();
                assert!((v + 0.5 * (1.0 - 2.0 * t).ln()).abs() < 1e-8, "q={q} t={t}");
            }
        }
        // ∫ φ(x) e^{|x|} dx = 2 e^{1/2} Φ(1).
        let v = tilted_gaussian_logmgf(1.0, 1.0, 0.0).unwrap();
        assert!((v - (2.0 * 0.5f64.exp() * norm_cdf(1.0)).ln()).abs() < 1e-8);
        assert_eq!(tilted_gaussian_logmgf(2.0, 0.3, 0.3).unwrap(), INFINITY);
    }

    #[test]
    fn chi_square_is_legendre_of_logmgf() {
        for t in [0.5, 1.0, 2.0, 4.0] {
            assert!((lambda_q_star(2.0, t).unwrap() - chi_square_rate(t)).abs() < 1e-8);
        }
    }

    #[test]
    fn lambda_q_star_vanishes_at_mean() {
        let m1 = gaussian_abs_moment(1.0);
        assert!(lambda_q_star(1.0, m1).unwrap().abs() < 1e-9);
        assert!(lambda_q_star(1.0, 1.2 * m1).unwrap() > 1e-3);
    }

    #[test]
    fn fp_star_at_mean_and_argmax() {
        let m = mp(4.0);
        let c = fp_star_solve(4.0, m * m).unwrap();
        assert!(c.value.abs() < 1e-6);
        assert!(c.theta[0].abs() < 1e-4 && c.theta[1].abs() < 1e-4);
        assert!(fp_star(3.0, mp(3.0).powi(2)).unwrap().abs() < 1e-6);
        assert!(matches!(fp_star(4.0, 1.2), Err(Error::Diverging(_))));
    }

    #[test]
    fn fp_star_matches_grid_and_coordinate_ascent() {
        let p = 4.0;
        let y = 1.2 * mp(p).powi(2);
        let newton = fp_star(p, y).unwrap();
        let lz = pgn_log_normaliser(p);
        let h = |t: [f64; 2]| {
            if t[1] >= 1.0 / p {
                return f64::NEG_INFINITY;
            }
            let li = log_integral_with_breaks(
                |x: f64| t[0] * x * x + t[1] * x.powi(4) - x.powi(4) / p - lz,
                Interval::REAL,
                &[0.0],
                1e-12,
            )
            .unwrap();
            t[0] * y + t[1] - li
        };
        // 200 × 200 grid over a box around the optimum.
        let mut best = f64::NEG_INFINITY;
        for i in 0..200 {
            for j in 0..200 {
                let t1 = -1.0 + 4.0 * i as f64 / 199.0;
                let t2 = -1.0 + 1.2499 * j as f64 / 199.0;
                best = best.max(h([t1, t2]));
            }
        }
        assert!(newton > 0.0);
        assert!((newton - best).abs() < 1e-3, "newton {newton} grid {best}");
        let ca = maximize_concave_2d(h, [0.0, 0.0], 1e-13).unwrap();
        assert!((ca.value - newton).abs() < 1e-6);
    }

    #[test]
    fn lambda_a_star_vanishes_at_gaussian_moments() {
        let m1 = gaussian_abs_moment(1.0);
        assert!(lambda_a_star(1.0, m1, 1.0).unwrap().abs() < 1e-8);
        assert!(lambda_a_star(1.0, m1, 1.3).unwrap() > 1e-3);
        assert_eq!(lambda_a_star(1.0, 1.0, 1.0).unwrap(), INFINITY);
    }
}
