use crate::convexkit::{gauss_legendre, integrate_finite};
use crate::error::{invalid, Result};
use crate::special::{norm_pdf, norm_quantile};
use crate::stiefel::EmpiricalMeasure;

/// Second argument of [`wasserstein_1d`].
#[derive(Debug, Clone, Copy)]
pub enum Reference<'a> {
    Empirical(&'a EmpiricalMeasure),
    /// `N(0, σ²)`.
    Gaussian(f64),
}

fn between(a: &EmpiricalMeasure, b: &EmpiricalMeasure, q: f64) -> f64 {
    let (xa, xb) = (a.atoms(), b.atoms());
    let (na, nb) = (xa.len() as u128, xb.len() as u128);
    // Quantile breakpoints live on the grid 1/(na·nb).
    let total = (na * nb) as f64;
    let (mut i, mut j, mut u) = (0usize, 0usize, 0u128);
    let mut acc = 0.0;
    while i < xa.len() && j < xb.len() {
        let ea = (i as u128 + 1) * nb;
        let eb = (j as u128 + 1) * na;
        let next = ea.min(eb);
        acc += (next - u) as f64 / total * (xa[i] - xb[j]).abs().powf(q);
        u = next;
        if ea == next {
            i += 1;
        }
        if eb == next {
            j += 1;
        }
    }
    acc
}

/// `∫_{z0}^{z1} |a - σz| φ(z) dz` with `u_i = Φ(z_i)` given exactly.
fn abs_cell(a: f64, sigma: f64, (u0, z0): (f64, f64), (u1, z1): (f64, f64)) -> f64 {
    let prim = |u: f64, z: f64| a * u + sigma * if z.is_finite() { norm_pdf(z) } else { 0.0 };
    let c = a / sigma;
    if z1 <= c {
        prim(u1, z1) - prim(u0, z0)
    } else if z0 >= c {
        prim(u0, z0) - prim(u1, z1)
    } else {
        let uc = crate::special::norm_cdf(c);
        2.0 * prim(uc, c) - prim(u0, z0) - prim(u1, z1)
    }
}

/// `|z|` beyond which the Gaussian tail is dropped.
const TAIL_Z: f64 = 38.0;

fn to_gaussian(a: &EmpiricalMeasure, sigma: f64, q: f64) -> f64 {
    let xs = a.atoms();
    let n = xs.len() as f64;
    if sigma == 0.0 {
        return xs.iter().map(|x| x.abs().powf(q)).sum::<f64>() / n;
    }
    if q == 1.0 {
        let mut prev = (0.0, f64::NEG_INFINITY);
        let mut acc = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            let u = (i + 1) as f64 / n;
            let next = (u, if i + 1 == xs.len() { f64::INFINITY } else { norm_quantile(u) });
            acc += abs_cell(x, sigma, prev, next);
            prev = next;
        }
        return acc;
    }
    let (nodes, weights) = gauss_legendre(16);
    let last = xs.len() - 1;
    let mut acc = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let (u0, u1) = (i as f64 / n, (i + 1) as f64 / n);
        if i == 0 || i == last {
            // Quantile singularities at the ends: integrate in z instead.
            let z0 = if i == 0 { -TAIL_Z } else { norm_quantile(u0) };
            let z1 = if i == last { TAIL_Z } else { norm_quantile(u1) };
            let f = |z: f64| (x - sigma * z).abs().powf(q) * norm_pdf(z);
            acc += integrate_finite(f, z0, z1, 1e-10).unwrap_or(f64::NAN);
            continue;
        }
        let (mid, half) = (0.5 * (u0 + u1), 0.5 * (u1 - u0));
        for (t, w) in nodes.iter().zip(&weights) {
            acc += half * w * (x - sigma * norm_quantile(mid + half * t)).abs().powf(q);
        }
    }
    acc
}

/// `(∫₀¹ |F_a⁻¹(u) - F_b⁻¹(u)|^q du)^{1/q}`.
pub fn wasserstein_1d(q: f64, a: &EmpiricalMeasure, b: Reference<'_>) -> Result<f64> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(invalid(format!("q must be at least 1, got {q}")));
    }
    let integral = match b {
        Reference::Empirical(b) => between(a, b, q),
        Reference::Gaussian(s) if s >= 0.0 && s.is_finite() => to_gaussian(a, s, q),
        Reference::Gaussian(s) => return Err(invalid(format!("σ must be non-negative, got {s}"))),
    };
    Ok(integral.max(0.0).powf(1.0 / q))
}

/// `sup_x |F_sample(x) - cdf(x)|`.
pub fn ks_statistic(sample: &EmpiricalMeasure, cdf: impl Fn(f64) -> f64) -> f64 {
    let xs = sample.atoms();
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let mut j = i;
        while j + 1 < xs.len() && xs[j + 1] == xs[i] {
            j += 1;
        }
        let f = cdf(xs[i]);
        d = d.max((f - i as f64 / n).abs()).max(((j + 1) as f64 / n - f).abs());
        i = j + 1;
    }
    d
}

/// `sup_x |F_a(x) - F_b(x)|`.
pub fn ks_two_sample(a: &EmpiricalMeasure, b: &EmpiricalMeasure) -> f64 {
    let (xa, xb) = (a.atoms(), b.atoms());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let t = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= t {
            i += 1;
        }
        while j < xb.len() && xb[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}
