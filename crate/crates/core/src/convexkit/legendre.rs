use std::f64::{INFINITY, NEG_INFINITY};

use super::optimize::brent_bounded;
use super::Fn1D;
use crate::error::{Error, Result};

const UNBOUNDED_ARG: f64 = 1e14;

/// Convex conjugate `sup_t { x t - f(t) }` of a convex function with effective domain.
///
/// The maximiser of `x t - f(t)` is bracketed by geometric steps inside the domain
/// (halving the distance to open endpoints), then refined with Brent's method.
/// An unbounded supremum is reported as `+inf`.
pub fn legendre_1d<F: Fn(f64) -> f64>(f: &Fn1D<F>, x: f64) -> Result<f64> {
    let dom = f.domain();
    let phi = |t: f64| {
        let v = f.eval(t);
        if v == INFINITY {
            NEG_INFINITY
        } else {
            x * t - v
        }
    };
    let mut t0 = dom.interior_point();
    let mut p0 = phi(t0);
    if !p0.is_finite() {
        let span = if dom.lo.is_finite() && dom.hi.is_finite() { dom.hi - dom.lo } else { 2.0 };
        let found = (1..32).map(|i| {
            let frac = i as f64 / 32.0;
            if dom.lo.is_finite() { dom.lo + frac * span } else { dom.hi - frac * span }
        })
        .find(|&t| phi(t).is_finite());
        match found {
            Some(t) => {
                t0 = t;
                p0 = phi(t);
            }
            None => return Err(Error::InvalidParameter("empty effective domain".into())),
        }
    }
    let mut h = 1e-2 * (1.0 + t0.abs());
    while !(dom.contains(t0 + h) && dom.contains(t0 - h)) && h > 1e-300 {
        h *= 0.5;
    }
    check_convex(f, t0 - h, t0, t0 + h)?;
    let (pp, pm) = (phi(t0 + h), phi(t0 - h));
    let (a, b, c, fb) = if pp <= p0 && pm <= p0 {
        (t0 - h, t0, t0 + h, p0)
    } else {
        let dir = if pp > pm { 1.0 } else { -1.0 };
        let end = if dir > 0.0 { dom.hi } else { dom.lo };
        let closed = if dir > 0.0 { dom.hi_closed } else { dom.lo_closed };
        let (mut prev, mut cur, mut fcur) = (t0, t0 + dir * h, pp.max(pm));
        let mut step = h;
        let mut last_gain;
        loop {
            step *= 2.0;
            let mut next = cur + dir * step;
            if end.is_finite() && (next - end) * dir >= 0.0 {
                let room = (end - cur).abs();
                if room <= 1e-15 * (1.0 + end.abs()) {
                    return Ok(if closed { phi(end).max(fcur) } else { fcur });
                }
                next = cur + 0.5 * (end - cur);
            }
            let fnext = phi(next);
            if fnext <= fcur {
                let (lo, hi) = if dir > 0.0 { (prev, next) } else { (next, prev) };
                break (lo, cur, hi, fcur);
            }
            last_gain = fnext - fcur;
            prev = cur;
            cur = next;
            fcur = fnext;
            if cur.abs() > UNBOUNDED_ARG {
                return Ok(if last_gain <= 1e-10 * (1.0 + fcur.abs()) { fcur } else { INFINITY });
            }
        }
    };
    check_convex(f, a, b, c)?;
    let neg = |t: f64| -phi(t);
    let tol = 1e-13 * (1.0 + b.abs());
    let (_, vb) = brent_bounded(&neg, a, c, tol);
    Ok((-vb).max(fb))
}

fn check_convex<F: Fn(f64) -> f64>(f: &Fn1D<F>, a: f64, b: f64, c: f64) -> Result<()> {
    let (fa, fb, fc) = (f.eval(a), f.eval(b), f.eval(c));
    if fa.is_finite() && fb.is_finite() && fc.is_finite() {
        let chord = fa + (fc - fa) * (b - a) / (c - a);
        let scale = 1.0 + fa.abs().max(fb.abs()).max(fc.abs());
        if fb > chord + 1e-9 * scale {
            return Err(Error::NotConvex { at: b });
        }
    }
    Ok(())
}
