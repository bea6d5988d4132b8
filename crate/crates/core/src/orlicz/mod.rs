//! Orlicz-ball analytics: per-dimension log-volume, the two-moment conjugate
//! `𝒥(u, v)`, the normalising tilt `b*` and the norm rate function.

use std::f64::INFINITY;

use crate::convexkit::{brent_bounded, find_root_bracketed, log_integral_with_breaks, ExpFamily2, Moments2};
use crate::distributions::OrliczFunction;
use crate::error::{Error, Result};
use crate::tolerances::QUAD_TOL;

/// `ν_{s,t}(dx) ∝ exp(s V(x) + t x²) dx` on the domain of `V`, `s ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltedOrliczMeasure {
    pub s: f64,
    pub t: f64,
    pub log_z: f64,
    /// `∫ V dν_{s,t}`.
    pub mean_v: f64,
    /// `∫ x² dν_{s,t}`.
    pub mean_sq: f64,
}

fn integrable(v: &OrliczFunction, th: [f64; 2]) -> bool {
    if !(th[0] <= 0.0) {
        return false;
    }
    if v.half_width().is_finite() {
        return true;
    }
    let g = |x: f64| th[0] * v.eval(x) + th[1] * x * x;
    let (a, b) = (g(2f64.powi(19)), g(2f64.powi(20)));
    b < -50.0 && b < a
}

fn interior(v: &OrliczFunction, th: [f64; 2]) -> bool {
    th[0] < 0.0 && integrable(v, th)
}

fn family<'a>(
    v: &'a OrliczFunction,
    base: &'a dyn Fn(f64) -> f64,
    phi: &'a dyn Fn(f64) -> [f64; 2],
    feasible: &'a dyn Fn([f64; 2]) -> bool,
) -> ExpFamily2<'a> {
    ExpFamily2 { base, phi, domain: v.domain(), breaks: &[0.0], feasible }
}

fn moments(v: &OrliczFunction, s: f64, t: f64) -> Result<Moments2> {
    if !integrable(v, [s, t]) {
        return Err(Error::NonIntegrable(format!("exp({s} V + {t} x²) is not integrable")));
    }
    let base = |_: f64| 0.0;
    let phi = |x: f64| [v.eval(x).min(1e300), x * x];
    let feasible = |th: [f64; 2]| integrable(v, th);
    family(v, &base, &phi, &feasible).moments([s, t])
}

/// The tilted measure `ν_{s,t}` with its normaliser and moments.
pub fn tilted(v: &OrliczFunction, s: f64, t: f64) -> Result<TiltedOrliczMeasure> {
    let m = moments(v, s, t)?;
    Ok(TiltedOrliczMeasure { s, t, log_z: m.log_z, mean_v: m.mean[0], mean_sq: m.mean[1] })
}

/// `lim (1/n) log |B_V^n| = -sup_{s<0} { s - log ∫ e^{sV} }`.
pub fn orlicz_log_volume(v: &OrliczFunction) -> Result<f64> {
    let h = |u: f64| {
        let s = -u.exp();
        match log_integral_with_breaks(|x| s * v.eval(x), v.domain(), &[0.0], QUAD_TOL) {
            Ok(l) if l.is_finite() => -(s - l),
            _ => INFINITY,
        }
    };
    let lo = -20.0;
    let grid: Vec<(f64, f64)> = (0..=40).map(|i| lo + i as f64).map(|u| (u, h(u))).collect();
    let (i, &(u0, best)) = grid
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("non-empty grid");
    if !best.is_finite() {
        return Err(Error::Diverging(format!("∫ exp(sV) diverges for every s < 0 ({})", v.label())));
    }
    if i == 0 || i == grid.len() - 1 {
        return Err(Error::Diverging("log-volume supremum escapes the tilt range".into()));
    }
    let (_, val) = brent_bounded(&h, u0 - 1.0, u0 + 1.0, 1e-11);
    Ok(val.min(best))
}

/// The tilt `b*` with `∫ V dμ_{V,b*} = 1` for `μ_{V,b} ∝ e^{-bV}`, and `m = (∫ x² dμ_{V,b*})^{1/2}`.
pub fn orlicz_bstar(v: &OrliczFunction) -> Result<(f64, f64)> {
    let excess = |lb: f64| match moments(v, -lb.exp(), 0.0) {
        Ok(m) => m.mean[0] - 1.0,
        Err(_) => f64::NAN,
    };
    let ln2 = 2f64.ln();
    let mut prev: Option<(f64, f64)> = None;
    let mut bracket = None;
    for j in -20..=20 {
        let lb = j as f64 * ln2;
        let e = excess(lb);
        if e.is_nan() {
            prev = None;
            continue;
        }
        if e == 0.0 {
            bracket = Some((lb, lb));
            break;
        }
        if let Some((pl, pe)) = prev {
            if pe > 0.0 && e < 0.0 {
                bracket = Some((pl, lb));
                break;
            }
        }
        prev = Some((lb, e));
    }
    let (a, b) = bracket.ok_or(Error::NoSignChange { lo: 2f64.powi(-20), hi: 2f64.powi(20) })?;
    let lb = if a == b { a } else { find_root_bracketed(excess, a, b, 1e-14)? };
    let bstar = lb.exp();
    let m = moments(v, -bstar, 0.0)?;
    Ok((bstar, m.mean[1].sqrt()))
}

/// Best tilt with `s = 0`: the `x²`-tilt matching the second moment `vv`.
fn boundary_tilt(v: &OrliczFunction, vv: f64) -> Result<TiltedOrliczMeasure> {
    let t = if v.half_width().is_finite() {
        let excess = |t: f64| moments(v, 0.0, t).map(|m| m.mean[1] - vv).unwrap_or(f64::NAN);
        let (mut lo, mut hi) = (-1.0, 1.0);
        while excess(lo) > 0.0 {
            lo *= 2.0;
            if lo < -1e12 {
                return Err(Error::Diverging("second moment too small".into()));
            }
        }
        while excess(hi) < 0.0 {
            hi *= 2.0;
            if hi > 1e12 {
                return Err(Error::Diverging("second moment too large".into()));
            }
        }
        find_root_bracketed(excess, lo, hi, 1e-13)?
    } else {
        -0.5 / vv
    };
    tilted(v, 0.0, t)
}

/// Maximiser of `s u + t v - log ∫ e^{sV + tx²}` over `s ≤ 0`, `t ∈ ℝ`, as a tilted measure.
///
/// When the `x²`-tilt alone already keeps `∫ V` below `u`, the supremum sits on `s = 0`.
pub fn orlicz_j_solve(v: &OrliczFunction, u: f64, vv: f64) -> Result<(f64, TiltedOrliczMeasure)> {
    if !(u > 0.0 && vv > 0.0 && u.is_finite() && vv.is_finite()) {
        return Err(Error::Diverging(format!("(u, v) = ({u}, {vv}) is outside the attainable moment cone")));
    }
    let w = v.half_width();
    if w.is_finite() && vv >= w * w {
        return Err(Error::Diverging(format!("v = {vv} exceeds the squared half width of the domain")));
    }
    if let Ok(nu) = boundary_tilt(v, vv) {
        if nu.mean_v <= u && (nu.mean_sq - vv).abs() <= 1e-9 * (1.0 + vv) {
            return Ok((nu.t * vv - nu.log_z, nu));
        }
    }
    let base = |_: f64| 0.0;
    let phi = |x: f64| [v.eval(x).min(1e300), x * x];
    let feasible = |th: [f64; 2]| interior(v, th);
    let fam = family(v, &base, &phi, &feasible);
    let c = fam.conjugate([u, vv], [-1.0, 0.0])?;
    let m = fam.moments(c.theta)?;
    if (m.mean[1] - vv).abs() > 1e-6 * (1.0 + vv) || m.mean[0] > u + 1e-6 * (1.0 + u) {
        return Err(Error::Diverging(format!("moments ({}, {}) miss the target ({u}, {vv})", m.mean[0], m.mean[1])));
    }
    let nu = TiltedOrliczMeasure { s: c.theta[0], t: c.theta[1], log_z: m.log_z, mean_v: m.mean[0], mean_sq: m.mean[1] };
    Ok((c.value, nu))
}

/// `𝒥(u, v) = sup_{s<0, t} { s u + t v - log ∫ e^{sV + tx²} }`.
pub fn orlicz_j(v: &OrliczFunction, u: f64, vv: f64) -> Result<f64> {
    orlicz_j_solve(v, u, vv).map(|r| r.0)
}

/// Rate of `‖X‖₂/√n` for the uniform law on the Orlicz ball: `𝒥(1, z²)` plus the log-volume.
pub fn orlicz_rate(v: &OrliczFunction, z: f64) -> Result<f64> {
    let lv = orlicz_log_volume(v)?;
    orlicz_rate_with_volume(v, lv, z)
}

pub(crate) fn orlicz_rate_with_volume(v: &OrliczFunction, log_volume: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Ok(INFINITY);
    }
    match orlicz_j(v, 1.0, z * z) {
        Ok(j) => Ok((j + log_volume).max(0.0)),
        Err(Error::Diverging(_)) => Ok(INFINITY),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratefn::{mp, rate_lp_norm};
    use std::f64::consts::{E, PI};

    fn quartic() -> OrliczFunction {
        OrliczFunction::power(4.0).unwrap()
    }

    #[test]
    fn log_volume_examples() {
        let v2 = OrliczFunction::power(2.0).unwrap();
        assert!((orlicz_log_volume(&v2).unwrap() - 0.5 * (2.0 * PI * E).ln()).abs() < 1e-8);
        let v1 = OrliczFunction::power(1.0).unwrap();
        assert!((orlicz_log_volume(&v1).unwrap() - (1.0 + 2f64.ln())).abs() < 1e-8);
    }

    #[test]
    fn bstar_examples() {
        let (b, m) = orlicz_bstar(&OrliczFunction::power(2.0).unwrap()).unwrap();
        assert!((b - 0.5).abs() < 1e-9 && (m - 1.0).abs() < 1e-9);
        let (b, m) = orlicz_bstar(&quartic()).unwrap();
        assert!((b - 0.25).abs() < 1e-9);
        assert!((m - mp(4.0)).abs() < 1e-6);
        let v = quartic();
        let mv: Vec<f64> = (-6..=6).map(|j| tilted(&v, -2f64.powi(j), 0.0).unwrap().mean_v).collect();
        assert!(mv.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn j_at_minimum_and_stationarity() {
        let v = quartic();
        let (_, m) = orlicz_bstar(&v).unwrap();
        let lv = orlicz_log_volume(&v).unwrap();
        let (j, nu) = orlicz_j_solve(&v, 1.0, m * m).unwrap();
        assert!((j + lv).abs() < 1e-8);
        assert!((nu.s + 0.25).abs() < 1e-6 && nu.t.abs() < 1e-6);
        // Direct evaluation at the stationary point of ν_{-1,0}.
        let base = tilted(&v, -1.0, 0.0).unwrap();
        let j = orlicz_j(&v, base.mean_v, base.mean_sq).unwrap();
        assert!((j - (-base.mean_v - base.log_z)).abs() < 1e-6);
    }

    #[test]
    fn j_shape() {
        let v = quartic();
        let (_, m) = orlicz_bstar(&v).unwrap();
        let (_, hi) = orlicz_j_solve(&v, 1.0, 1.2 * m * m).unwrap();
        let (_, lo) = orlicz_j_solve(&v, 1.0, 0.7 * m * m).unwrap();
        assert!(hi.t > 0.0 && lo.t < 0.0 && hi.s < 0.0 && lo.s <= 0.0);
        let vs = [0.2, 0.35, 0.5, 0.65, 0.8];
        let js: Vec<f64> = vs.iter().map(|&x| orlicz_j(&v, 1.0, x).unwrap()).collect();
        for i in 0..vs.len() - 2 {
            let mid = orlicz_j(&v, 1.0, 0.5 * (vs[i] + vs[i + 2])).unwrap();
            assert!(mid <= 0.5 * (js[i] + js[i + 2]) + 1e-8);
        }
        for x in [0.3, 0.6] {
            assert!(orlicz_j(&v, 0.8, x).unwrap() >= orlicz_j(&v, 1.2, x).unwrap() - 1e-10);
        }
    }

    #[test]
    fn rate_matches_lp_ball() {
        let v = quartic();
        let (_, m) = orlicz_bstar(&v).unwrap();
        assert!(orlicz_rate(&v, m).unwrap() < 1e-6);
        for z in [0.5 * m, 1.3 * m] {
            let a = orlicz_rate(&v, z).unwrap();
            let b = rate_lp_norm(4.0, z).unwrap();
            assert!(a == b || (a - b).abs() < 1e-4, "z={z}: {a} vs {b}");
        }
        assert_eq!(orlicz_rate(&v, 0.0).unwrap(), INFINITY);
    }
}
