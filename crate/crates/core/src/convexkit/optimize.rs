use std::f64::{INFINITY, NEG_INFINITY};

use super::Fn1D;
use crate::error::{Error, Result};

const GOLD: f64 = 0.381_966_011_250_105_1;

/// Brent's bounded minimiser on `(a, b)`. Never evaluates the endpoints and
/// falls back to golden steps whenever the parabola is unusable (e.g. `+inf`).
pub(crate) fn brent_bounded(f: &dyn Fn(f64) -> f64, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let sqrt_eps = f64::EPSILON.sqrt();
    let mut x = a + GOLD * (b - a);
    let (mut v, mut w) = (x, x);
    let mut fx = f(x);
    if fx.is_nan() {
        fx = INFINITY;
    }
    let (mut fv, mut fw) = (fx, fx);
    let (mut d, mut e): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let m = 0.5 * (a + b);
        let tol1 = sqrt_eps * 1e-3 * x.abs() + xtol / 3.0;
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 && fx.is_finite() && fw.is_finite() && fv.is_finite() {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < m { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= m { a - x } else { b - x };
            d = GOLD * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let mut fu = f(u);
        if fu.is_nan() {
            fu = INFINITY;
        }
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, fx)
}

/// Minimiser of a unimodal function starting from `bracket`, which is widened
/// geometrically inside the domain of `g` while the minimum sits on its edge.
pub fn minimize_unimodal<F: Fn(f64) -> f64>(
    g: &Fn1D<F>,
    bracket: (f64, f64),
    tol: f64,
) -> Result<(f64, f64)> {
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let dom = g.domain();
    let (mut a, mut b) = if bracket.0 <= bracket.1 { bracket } else { (bracket.1, bracket.0) };
    a = a.max(dom.lo);
    b = b.min(dom.hi);
    if !(a < b) {
        return Err(Error::BracketFailure("empty bracket".into()));
    }
    let f = |t: f64| g.eval(t);
    for _ in 0..200 {
        let (x, fx) = brent_bounded(&f, a, b, tol);
        let edge = 20.0 * (tol + 1e-9 * x.abs());
        let at_hi = b - x <= edge;
        let at_lo = x - a <= edge;
        if !at_hi && !at_lo {
            return if fx.is_finite() {
                Ok((x, fx))
            } else {
                Err(Error::BracketFailure("no finite value in bracket".into()))
            };
        }
        let w = b - a;
        let (end, closed, cur) = if at_hi { (dom.hi, dom.hi_closed, b) } else { (dom.lo, dom.lo_closed, a) };
        let room = (end - cur).abs();
        if end.is_finite() && room <= 1e-14 * (1.0 + end.abs()) {
            if closed && g.eval(end) <= fx {
                return Ok((end, g.eval(end)));
            }
            return Err(Error::BracketFailure("minimum at the domain boundary".into()));
        }
        let step = (2.0 * w).min(0.5 * room);
        if !step.is_finite() || cur.abs() > 1e300 {
            return Err(Error::BracketFailure("expansion cap reached".into()));
        }
        if at_hi {
            b += step;
        } else {
            a -= step;
        }
    }
    Err(Error::BracketFailure("expansion cap reached".into()))
}

/// Bisection root of `phi` on `[lo, hi]`; `phi(lo)` and `phi(hi)` must differ in sign.
pub fn find_root_bracketed(phi: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (phi(a), phi(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    for _ in 0..400 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        let fm = phi(m);
        if fm.abs() < best.1.abs() {
            best = (m, fm);
        }
        if fm == 0.0 || fm.abs() <= tol {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(best.0)
}

/// Result of a planar maximisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Max2 {
    pub arg: [f64; 2],
    pub value: f64,
}

const DIVERGENCE_ARG: f64 = 1e9;

fn line_max(h: &dyn Fn([f64; 2]) -> f64, x: [f64; 2], d: [f64; 2], f0: f64, tol: f64) -> Result<([f64; 2], f64)> {
    let at = |a: f64| [x[0] + a * d[0], x[1] + a * d[1]];
    let phi = |a: f64| {
        let v = h(at(a));
        if v.is_nan() {
            NEG_INFINITY
        } else {
            v
        }
    };
    let mut s = 0.1 * (1.0 + x[0].abs().max(x[1].abs()));
    let (fp, fm) = (phi(s), phi(-s));
    let (lo, mid, hi, fmid);
    if fp <= f0 && fm <= f0 {
        lo = -s;
        mid = 0.0;
        hi = s;
        fmid = f0;
    } else {
        let dir = if fp > fm { 1.0 } else { -1.0 };
        let (mut prev, mut cur, mut fcur) = (0.0, dir * s, fp.max(fm));
        loop {
            s *= 2.0;
            let next = cur + dir * s;
            let fnext = phi(next);
            if fnext <= fcur {
                let (a, c) = if dir > 0.0 { (prev, next) } else { (next, prev) };
                lo = a;
                hi = c;
                mid = cur;
                fmid = fcur;
                break;
            }
            prev = cur;
            cur = next;
            fcur = fnext;
            if cur.abs() > DIVERGENCE_ARG {
                return Err(Error::Diverging("objective increases without bound along a line".into()));
            }
        }
    }
    let neg = |a: f64| -phi(a);
    let (mut a, (ab, fb)) = (mid, brent_bounded(&neg, lo, hi, tol.sqrt() * 1e-3 * (1.0 + mid.abs())));
    let mut fa = fmid;
    if -fb > fa {
        a = ab;
        fa = -fb;
    }
    Ok((at(a), fa))
}

/// Maximiser of a concave function of two variables by coordinate ascent,
/// accelerated Powell-style: after each sweep the net displacement replaces the
/// direction that gained most.
///
/// `h` may return `-inf` outside its domain; `init` must be a point where it is finite.
pub fn maximize_concave_2d(h: impl Fn([f64; 2]) -> f64, init: [f64; 2], tol: f64) -> Result<Max2> {
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let mut x = init;
    let mut f = h(x);
    if !f.is_finite() {
        return Err(Error::InvalidParameter("objective is not finite at the starting point".into()));
    }
    let mut dirs = [[1.0, 0.0], [0.0, 1.0]];
    for iter in 0..500 {
        if iter % 6 == 0 {
            dirs = [[1.0, 0.0], [0.0, 1.0]];
        }
        let (x_old, f_old) = (x, f);
        let mut biggest = (0usize, 0.0);
        for (i, d) in dirs.iter().enumerate() {
            let (nx, nf) = line_max(&h, x, *d, f, tol)?;
            if nf >= f {
                if nf - f > biggest.1 {
                    biggest = (i, nf - f);
                }
                x = nx;
                f = nf;
            }
        }
        let disp = [x[0] - x_old[0], x[1] - x_old[1]];
        let len = disp[0].hypot(disp[1]);
        if len > 0.0 {
            let d = [disp[0] / len, disp[1] / len];
            let (nx, nf) = line_max(&h, x, d, f, tol)?;
            if nf >= f {
                x = nx;
                f = nf;
            }
            dirs[biggest.0] = d;
        }
        if x[0].abs().max(x[1].abs()) > DIVERGENCE_ARG || f == f64::INFINITY {
            return Err(Error::Diverging("iterates escape to infinity".into()));
        }
        let moved = (x[0] - x_old[0]).hypot(x[1] - x_old[1]);
        if f - f_old <= tol * (1.0 + f.abs()) && moved <= tol.sqrt() * (1.0 + x[0].abs().max(x[1].abs())) {
            return Ok(Max2 { arg: x, value: f });
        }
    }
    Err(Error::Diverging("no convergence within the iteration cap".into()))
}
