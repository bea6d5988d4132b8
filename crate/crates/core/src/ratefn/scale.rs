use std::f64::INFINITY;

use crate::convexkit::brent_bounded;

/// Parametrisation of a scale variable `c` by an unconstrained `u`.
#[derive(Debug, Clone, Copy)]
pub(crate) enum ScaleDomain {
    /// `c = e^u` on `(0, inf)`.
    Positive,
    /// `c = 1 / (1 + e^{-u})` on `(0, 1)`.
    Unit,
}

impl ScaleDomain {
    fn map(self, u: f64) -> f64 {
        match self {
            ScaleDomain::Positive => u.exp(),
            ScaleDomain::Unit => 1.0 / (1.0 + (-u).exp()),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

pub(crate) const WIDE: Grid = Grid { lo: -36.0, hi: 36.0, step: 0.5 };

/// `inf_c obj(c)` over a scale domain: a coarse scan in `u` locates the
/// feasible region and the best cell, feasibility edges are found by
/// bisection and the infimum is refined with Brent's method.
pub(crate) fn inf_scale(obj: &dyn Fn(f64) -> f64, dom: ScaleDomain, grid: Grid) -> f64 {
    let g = |u: f64| {
        let v = obj(dom.map(u));
        if v.is_nan() {
            INFINITY
        } else {
            v
        }
    };
    let n = ((grid.hi - grid.lo) / grid.step).round() as usize + 1;
    let us: Vec<f64> = (0..n).map(|i| grid.lo + i as f64 * grid.step).collect();
    let vals: Vec<f64> = us.iter().map(|&u| g(u)).collect();
    let Some((imin, &best)) = vals
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
    else {
        return INFINITY;
    };
    let edge = |inside: f64, outside: f64| {
        let (mut a, mut b) = (inside, outside);
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            if g(m).is_finite() {
                a = m;
            } else {
                b = m;
            }
        }
        a
    };
    let lo = if imin == 0 {
        us[0] - grid.step
    } else if vals[imin - 1].is_finite() {
        us[imin - 1]
    } else {
        edge(us[imin], us[imin - 1])
    };
    let hi = if imin + 1 == n {
        us[n - 1] + grid.step
    } else if vals[imin + 1].is_finite() {
        us[imin + 1]
    } else {
        edge(us[imin], us[imin + 1])
    };
    let mut out = best;
    let (_, v) = brent_bounded(&g, lo, hi, 1e-12);
    if v < out {
        out = v;
    }
    for end in [lo, hi] {
        let v = g(end);
        if v < out {
            out = v;
        }
    }
    out
}
