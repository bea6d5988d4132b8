use std::f64::{INFINITY, NEG_INFINITY};
use std::sync::OnceLock;

use super::Interval;
use crate::error::{Error, Result};

const GL_ORDER: usize = 15;
const MAX_PIECES: usize = 4000;
/// Relative size below which an outer tail panel is considered negligible.
const TAIL_REL: f64 = 1e-16;
/// log-scale window below the running maximum that still counts as mass.
const LOG_WINDOW: f64 = 60.0;
const MAX_DOUBLINGS: i32 = 70;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

fn panel<const K: usize>(w: &dyn Fn(f64) -> [f64; K], a: f64, b: f64) -> [f64; K] {
    let (nodes, weights) = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = [0.0; K];
    for (x, wt) in nodes.iter().zip(weights) {
        let v = w(mid + half * x);
        for k in 0..K {
            acc[k] += wt * v[k];
        }
    }
    for v in acc.iter_mut() {
        *v *= half;
    }
    acc
}

struct Piece<const K: usize> {
    a: f64,
    b: f64,
    left: [f64; K],
    right: [f64; K],
    err: [f64; K],
}

fn piece<const K: usize>(w: &dyn Fn(f64) -> [f64; K], a: f64, b: f64, whole: [f64; K]) -> Piece<K> {
    let mid = 0.5 * (a + b);
    let left = panel(w, a, mid);
    let right = panel(w, mid, b);
    let err = std::array::from_fn(|k| (left[k] + right[k] - whole[k]).abs());
    Piece { a, b, left, right, err }
}

/// Globally adaptive quadrature: the panel with the largest error estimate is
/// bisected until every component meets `tol` relative to its total, or the
/// panel budget is spent.
fn global_adaptive<const K: usize>(w: &dyn Fn(f64) -> [f64; K], nodes: &[f64], tol: f64) -> [f64; K] {
    let mut pieces: Vec<Piece<K>> = nodes
        .windows(2)
        .filter(|p| p[1] > p[0])
        .map(|p| {
            let whole = panel(w, p[0], p[1]);
            piece(w, p[0], p[1], whole)
        })
        .collect();
    let sum = |pieces: &[Piece<K>]| -> ([f64; K], [f64; K]) {
        let mut tot = [0.0; K];
        let mut err = [0.0; K];
        for p in pieces {
            for k in 0..K {
                tot[k] += p.left[k] + p.right[k];
                err[k] += p.err[k];
            }
        }
        (tot, err)
    };
    let (mut tot, mut err) = sum(&pieces);
    for round in 0..MAX_PIECES {
        if round % 64 == 63 {
            // Refresh running sums against drift.
            (tot, err) = sum(&pieces);
        }
        let target: [f64; K] = std::array::from_fn(|k| tol * tot[k].abs() + f64::MIN_POSITIVE);
        if (0..K).all(|k| err[k] <= target[k]) {
            break;
        }
        let score = |p: &Piece<K>| (0..K).map(|k| p.err[k] / target[k]).fold(0.0, f64::max);
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .map(|(i, p)| (i, score(p)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let p = pieces.swap_remove(idx);
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            pieces.push(Piece { err: [0.0; K], ..p });
            continue;
        }
        let l = piece(w, p.a, mid, p.left);
        let r = piece(w, mid, p.b, p.right);
        for k in 0..K {
            tot[k] += l.left[k] + l.right[k] + r.left[k] + r.right[k] - p.left[k] - p.right[k];
            err[k] += l.err[k] + r.err[k] - p.err[k];
        }
        pieces.push(l);
        pieces.push(r);
    }
    sum(&pieces).0
}

/// Adaptive Gauss–Legendre quadrature of a smooth function on a finite interval.
pub fn integrate_finite(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::NonIntegrable("infinite limits".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    let w = |x: f64| [f(x)];
    let nodes: Vec<f64> = (0..=16).map(|i| a + (b - a) * i as f64 / 16.0).collect();
    let acc = global_adaptive(&w, &nodes, tol);
    if acc[0].is_finite() {
        Ok(acc[0])
    } else {
        Err(Error::NonIntegrable("non-finite quadrature sum".into()))
    }
}

fn anchor(d: &Interval) -> f64 {
    if d.lo <= 0.0 && d.hi >= 0.0 {
        0.0
    } else {
        d.interior_point()
    }
}

fn golden_max(g: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..80 {
        if (b - a).abs() <= 1e-13 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = g(x2);
        }
    }
    if f1 >= f2 {
        x1
    } else {
        x2
    }
}

/// Integrates `exp(g(x) - shift) * h(x)` over `domain`, returning `shift` and the
/// component integrals. `shift` is a maximum of `g` located by a pre-scan, so
/// the sums are of moderate size whatever the magnitude of `g`.
pub(crate) fn integrate_exp<const K: usize>(
    g: &dyn Fn(f64) -> f64,
    h: &dyn Fn(f64) -> [f64; K],
    domain: Interval,
    breaks: &[f64],
    tol: f64,
) -> Result<(f64, [f64; K])> {
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    if !(domain.lo < domain.hi) {
        return Ok((NEG_INFINITY, [0.0; K]));
    }
    let gs = |x: f64| {
        let v = g(x);
        if v.is_nan() {
            NEG_INFINITY
        } else {
            v
        }
    };
    let (lo, hi) = (domain.lo, domain.hi);
    let c = anchor(&domain);
    let inside = |x: f64| x > lo && x < hi;

    let mut pts: Vec<f64> = Vec::new();
    if c > lo && c < hi {
        pts.push(c);
    }
    let grade = [
        1.0 / 1024.0,
        1.0 / 256.0,
        1.0 / 64.0,
        1.0 / 16.0,
        0.125,
        0.25,
        0.375,
        0.5,
        0.625,
        0.75,
        0.875,
        15.0 / 16.0,
        63.0 / 64.0,
        255.0 / 256.0,
        1023.0 / 1024.0,
    ];
    // Right and left half-lines are scanned separately; unbounded sides grow by doubling.
    let mut tail_next = [None::<i32>; 2];
    for (side, end) in [(0usize, hi), (1usize, lo)] {
        let dir = if side == 0 { 1.0 } else { -1.0 };
        if (end - c).abs() == 0.0 {
            continue;
        }
        if end.is_finite() {
            for f in grade {
                pts.push(c + (end - c) * f);
            }
        } else {
            let mut running = NEG_INFINITY;
            let mut j = -8;
            loop {
                let x = c + dir * 2f64.powi(j);
                let v = gs(x);
                pts.push(x);
                running = running.max(v);
                j += 1;
                if j > MAX_DOUBLINGS {
                    return Err(Error::NonIntegrable("no decay at infinity".into()));
                }
                if j > 2 && v < running - LOG_WINDOW {
                    break;
                }
            }
            tail_next[side] = Some(j);
        }
    }
    for &b in breaks {
        if inside(b) {
            pts.push(b);
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();

    let vals: Vec<f64> = pts.iter().map(|&x| gs(x)).collect();
    let (_, &gmax) = vals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .ok_or_else(|| Error::NonIntegrable("empty skeleton".into()))?;
    if gmax == INFINITY {
        return Err(Error::NonIntegrable("integrand is infinite".into()));
    }
    if gmax == NEG_INFINITY {
        return Ok((NEG_INFINITY, [0.0; K]));
    }
    // Refine every local maximum of the skeleton that carries non-negligible mass.
    let mut shift = gmax;
    let mut extra = Vec::new();
    for i in 0..pts.len() {
        let v = vals[i];
        let up_left = i == 0 || vals[i - 1] <= v;
        let up_right = i + 1 == pts.len() || vals[i + 1] <= v;
        if !(up_left && up_right && v > gmax - LOG_WINDOW) {
            continue;
        }
        let left_end = if i > 0 { pts[i - 1] } else if lo.is_finite() { lo } else { pts[i] };
        let right_end = if i + 1 < pts.len() { pts[i + 1] } else if hi.is_finite() { hi } else { pts[i] };
        if !(right_end > left_end) {
            continue;
        }
        let xm = golden_max(&gs, left_end, right_end);
        let gm = gs(xm);
        if !(gm.is_finite() && gm > v && inside(xm)) {
            continue;
        }
        shift = shift.max(gm);
        // Width from curvature, so a sharp peak is resolved by explicit breakpoints.
        let dh = 1e-4 * (1.0 + xm.abs());
        let curv = (gs(xm + dh) - 2.0 * gm + gs(xm - dh)) / (dh * dh);
        extra.push(xm);
        if curv.is_finite() && curv < 0.0 {
            let w = 1.0 / (-curv).sqrt();
            for f in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0] {
                extra.push(xm + f * w);
                extra.push(xm - f * w);
            }
        }
    }
    for x in extra {
        if inside(x) {
            pts.push(x);
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();

    let mut nodes = Vec::with_capacity(pts.len() + 2);
    if lo.is_finite() {
        nodes.push(lo);
    }
    nodes.extend(pts.iter().copied());
    if hi.is_finite() {
        nodes.push(hi);
    }
    nodes.dedup();

    let w = |x: f64| -> [f64; K] {
        let e = (gs(x) - shift).exp();
        if e == 0.0 {
            return [0.0; K];
        }
        let hv = h(x);
        std::array::from_fn(|k| e * hv[k])
    };

    // Extend unbounded sides by doubling until the outermost panel is negligible.
    let coarse_total: [f64; K] = {
        let mut t = [0.0; K];
        for p in nodes.windows(2) {
            let v = panel(&w, p[0], p[1]);
            for k in 0..K {
                t[k] += v[k].abs();
            }
        }
        t
    };
    let mut extra_right = Vec::new();
    let mut extra_left = Vec::new();
    for side in 0..2 {
        let Some(mut j) = tail_next[side] else { continue };
        let dir = if side == 0 { 1.0 } else { -1.0 };
        let mut inner = c + dir * 2f64.powi(j - 1);
        loop {
            let outer = c + dir * 2f64.powi(j);
            let (a, b) = if dir > 0.0 { (inner, outer) } else { (outer, inner) };
            let v = panel(&w, a, b);
            if side == 0 {
                extra_right.push(outer);
            } else {
                extra_left.push(outer);
            }
            let small = (0..K).all(|k| v[k].abs() <= TAIL_REL * coarse_total[k]);
            if small {
                break;
            }
            j += 1;
            inner = outer;
            if j > MAX_DOUBLINGS {
                return Err(Error::NonIntegrable("tail mass does not vanish".into()));
            }
        }
    }
    extra_left.reverse();
    let mut all = extra_left;
    all.extend(nodes);
    all.extend(extra_right);
    let acc = global_adaptive(&w, &all, tol);
    if acc.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonIntegrable("non-finite quadrature sum".into()));
    }
    Ok((shift, acc))
}

/// `log ∫_D exp(g(x)) dx` for a log-integrand `g` on the domain `D`.
///
/// Fails with [`Error::NonIntegrable`] when the integrand does not decay.
pub fn log_integral(g: impl Fn(f64) -> f64, domain: Interval, tol: f64) -> Result<f64> {
    log_integral_with_breaks(g, domain, &[], tol)
}

/// As [`log_integral`], with additional points where `g` may be non-smooth.
pub fn log_integral_with_breaks(
    g: impl Fn(f64) -> f64,
    domain: Interval,
    breaks: &[f64],
    tol: f64,
) -> Result<f64> {
    let (shift, s) = integrate_exp::<1>(&g, &|_| [1.0], domain, breaks, tol)?;
    Ok(if s[0] > 0.0 { shift + s[0].ln() } else { NEG_INFINITY })
}

/// `log Z` together with the mean and covariance of two features under the
/// density proportional to `exp(g)`.
#[derive(Debug, Clone, Copy)]
pub struct Moments2 {
    pub log_z: f64,
    pub mean: [f64; 2],
    pub cov: [[f64; 2]; 2],
}

pub(crate) fn moments2(
    g: &dyn Fn(f64) -> f64,
    phi: &dyn Fn(f64) -> [f64; 2],
    domain: Interval,
    breaks: &[f64],
    tol: f64,
) -> Result<Moments2> {
    let h = |x: f64| {
        let [a, b] = phi(x);
        [1.0, a, b, a * a, a * b, b * b]
    };
    let (shift, s) = integrate_exp::<6>(g, &h, domain, breaks, tol)?;
    if !(s[0] > 0.0) {
        return Err(Error::NonIntegrable("zero mass".into()));
    }
    let m1 = s[1] / s[0];
    let m2 = s[2] / s[0];
    let c11 = (s[3] / s[0] - m1 * m1).max(0.0);
    let c12 = s[4] / s[0] - m1 * m2;
    let c22 = (s[5] / s[0] - m2 * m2).max(0.0);
    Ok(Moments2 { log_z: shift + s[0].ln(), mean: [m1, m2], cov: [[c11, c12], [c12, c22]] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(GL_ORDER);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        let m28: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(28)).sum();
        assert!((m28 - 2.0 / 29.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_normaliser() {
        let v = log_integral(|x| -x * x / 2.0, Interval::REAL, 1e-12).unwrap();
        assert!((v - 0.5 * (2.0 * PI).ln()).abs() < 1e-12);
    }

    #[test]
    fn laplace_on_half_line_and_shifted_peak() {
        let v = log_integral(|x| -x, Interval::above(0.0), 1e-12).unwrap();
        assert!(v.abs() < 1e-12);
        let w = log_integral(|x| -(x - 300.0).powi(2) * 50.0 + 1e4, Interval::REAL, 1e-12).unwrap();
        assert!((w - 1e4 - 0.5 * (PI / 50.0).ln()).abs() < 1e-10);
    }

    #[test]
    fn finite_domain_and_large_magnitude() {
        let v = log_integral(|_| 0.0, Interval::closed(-1.0, 1.0), 1e-12).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-13);
        let u = log_integral(|x| -1e3 * x.abs().powi(4) - 700.0, Interval::REAL, 1e-12).unwrap();
        let base = (2.0 * statrs::function::gamma::gamma(1.25)).ln() - 0.25 * 1e3f64.ln() - 700.0;
        assert!((u - base).abs() < 1e-11);
    }

    #[test]
    fn non_decaying_integrand_is_rejected() {
        assert!(matches!(
            log_integral(|x| x, Interval::REAL, 1e-12),
            Err(Error::NonIntegrable(_))
        ));
        assert!(matches!(log_integral(|x| -x * x, Interval::REAL, 0.0), Err(Error::InvalidTolerance(_))));
    }

    #[test]
    fn gaussian_moments() {
        let m = moments2(&|x| -x * x / 2.0, &|x| [x * x, x.abs()], Interval::REAL, &[], 1e-12).unwrap();
        assert!((m.mean[0] - 1.0).abs() < 1e-12);
        assert!((m.mean[1] - (2.0 / PI).sqrt()).abs() < 1e-12);
        assert!((m.cov[0][0] - 2.0).abs() < 1e-11);
    }

    #[test]
    fn finite_integral() {
        let v = integrate_finite(|x| x.sin(), 0.0, PI, 1e-13).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
    }
}
