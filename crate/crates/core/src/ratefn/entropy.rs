use std::f64::consts::{E, PI};
use std::f64::INFINITY;

use crate::error::{invalid, Error, Result};

/// Piecewise-uniform probability density on contiguous bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    edges: Vec<f64>,
    masses: Vec<f64>,
}

impl Histogram {
    pub fn new(edges: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if edges.len() != masses.len() + 1 || masses.is_empty() {
            return Err(Error::DimMismatch { expected: masses.len() + 1, got: edges.len() });
        }
        if edges.windows(2).any(|w| !(w[1] > w[0])) || edges.iter().any(|e| !e.is_finite()) {
            return Err(invalid("histogram edges must be finite and strictly increasing"));
        }
        if masses.iter().any(|&m| !(m >= 0.0)) {
            return Err(invalid("histogram masses must be non-negative"));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(invalid(format!("histogram masses sum to {total}, not 1")));
        }
        Ok(Histogram { edges, masses })
    }

    /// Freedman–Diaconis binning of a sample.
    pub fn freedman_diaconis(sample: &[f64]) -> Result<Self> {
        let mut xs: Vec<f64> = sample.iter().copied().filter(|x| x.is_finite()).collect();
        if xs.len() < 2 {
            return Err(invalid("need at least two finite points"));
        }
        xs.sort_by(f64::total_cmp);
        let n = xs.len();
        let quantile = |u: f64| {
            let h = u * (n - 1) as f64;
            let i = h.floor() as usize;
            let f = h - i as f64;
            if i + 1 < n {
                xs[i] * (1.0 - f) + xs[i + 1] * f
            } else {
                xs[n - 1]
            }
        };
        let (lo, hi) = (xs[0], xs[n - 1]);
        if !(hi > lo) {
            return Err(invalid("sample has zero range"));
        }
        let iqr = quantile(0.75) - quantile(0.25);
        let mut width = 2.0 * iqr / (n as f64).cbrt();
        if !(width > 0.0) {
            width = (hi - lo) / (n as f64).sqrt();
        }
        let bins = (((hi - lo) / width).ceil() as usize).max(1);
        let width = (hi - lo) / bins as f64;
        let edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
        let mut counts = vec![0usize; bins];
        for &x in &xs {
            let i = (((x - lo) / width) as usize).min(bins - 1);
            counts[i] += 1;
        }
        let masses = counts.iter().map(|&c| c as f64 / n as f64).collect();
        Ok(Histogram { edges, masses })
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    fn bins(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.edges.windows(2).zip(&self.masses).map(|(w, &m)| (w[0], w[1], m))
    }

    /// Differential entropy `-∫ f log f`.
    pub fn entropy(&self) -> f64 {
        self.bins()
            .filter(|&(_, _, m)| m > 0.0)
            .map(|(a, b, m)| -m * (m / (b - a)).ln())
            .sum()
    }

    /// `∫ |x|^q f(x) dx`.
    pub fn abs_moment(&self, q: f64) -> f64 {
        let prim = |x: f64| x.signum() * x.abs().powf(q + 1.0) / (q + 1.0);
        self.bins().map(|(a, b, m)| m * (prim(b) - prim(a)) / (b - a)).sum()
    }

    /// Law of `X / c` when `X` has this density.
    pub fn scaled(&self, c: f64) -> Histogram {
        Histogram { edges: self.edges.iter().map(|e| e / c).collect(), masses: self.masses.clone() }
    }
}

/// Probability measure argument of an empirical-measure rate function.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureArg {
    /// Centred Gaussian with standard deviation `σ`.
    Gaussian(f64),
    Histogram(Histogram),
}

impl MeasureArg {
    pub fn validate(&self) -> Result<()> {
        match self {
            MeasureArg::Gaussian(s) if !(*s > 0.0 && s.is_finite()) => Err(invalid(format!("σ must be positive, got {s}"))),
            _ => Ok(()),
        }
    }

    pub fn entropy(&self) -> f64 {
        match self {
            MeasureArg::Gaussian(s) => 0.5 * (2.0 * PI * E * s * s).ln(),
            MeasureArg::Histogram(h) => h.entropy(),
        }
    }

    pub fn second_moment(&self) -> f64 {
        self.abs_moment(2.0)
    }

    pub fn abs_moment(&self, q: f64) -> f64 {
        match self {
            MeasureArg::Gaussian(s) if q == 2.0 => s * s,
            MeasureArg::Gaussian(s) => s.powf(q) * super::gaussian_abs_moment(q),
            MeasureArg::Histogram(h) => h.abs_moment(q),
        }
    }

    /// Law of `X / c`.
    pub fn scaled(&self, c: f64) -> MeasureArg {
        match self {
            MeasureArg::Gaussian(s) => MeasureArg::Gaussian(s / c),
            MeasureArg::Histogram(h) => MeasureArg::Histogram(h.scaled(c)),
        }
    }
}

/// Entropy functional of the linear regime:
/// `-λ h(ν) + (λ/2) log(2πe) + ((1-λ)/2) log((1-λ)/(1-λ M₂(ν)))`.
pub fn entropy_h_lambda(lambda: f64, nu: &MeasureArg) -> f64 {
    if !(lambda > 0.0 && lambda <= 1.0) || nu.validate().is_err() {
        return INFINITY;
    }
    let lm2 = lambda * nu.second_moment();
    let tail = if lambda == 1.0 {
        if lm2 > 1.0 {
            return INFINITY;
        }
        0.0
    } else {
        if lm2 >= 1.0 {
            return INFINITY;
        }
        0.5 * (1.0 - lambda) * ((1.0 - lambda) / (1.0 - lm2)).ln()
    };
    let v = -lambda * nu.entropy() + 0.5 * lambda * (2.0 * PI * E).ln() + tail;
    v.max(0.0)
}

/// `H(ν | γ_c)`, the relative entropy with respect to `N(0, c²)`.
pub fn relative_entropy_to_gaussian(nu: &MeasureArg, c: f64) -> f64 {
    if !(c > 0.0) || nu.validate().is_err() {
        return INFINITY;
    }
    let v = match nu {
        MeasureArg::Gaussian(a) => 0.5 * (a * a / (c * c) - 1.0) - (a / c).ln(),
        MeasureArg::Histogram(h) => -h.entropy() + 0.5 * (2.0 * PI * c * c).ln() + h.abs_moment(2.0) / (2.0 * c * c),
    };
    v.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratefn::gaussian_ratio_rate;
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn gaussian_values() {
        for l in [0.1, 0.5, 1.0] {
            assert!(entropy_h_lambda(l, &MeasureArg::Gaussian(1.0)).abs() < 1e-14);
        }
        for s in [0.3, 0.8, 1.0] {
            assert!((entropy_h_lambda(1.0, &MeasureArg::Gaussian(s)) + s.ln()).abs() < 1e-14);
        }
        assert_eq!(entropy_h_lambda(0.5, &MeasureArg::Gaussian(2f64.sqrt())), INFINITY);
        assert!(relative_entropy_to_gaussian(&MeasureArg::Gaussian(1.7), 1.7).abs() < 1e-15);
        let v = relative_entropy_to_gaussian(&MeasureArg::Gaussian(2.0), 1.0);
        assert!((v - (1.5 - 2f64.ln())).abs() < 1e-14);
    }

    #[test]
    fn gaussian_family_minimum_is_ratio_rate() {
        for l in [0.25, 0.5, 1.0] {
            for z in [0.3, 0.6, 0.9 * f64::sqrt(l)] {
                let nu = MeasureArg::Gaussian(z / f64::sqrt(l));
                let v = entropy_h_lambda(l, &nu);
                assert!((v - gaussian_ratio_rate(l, z)).abs() < 1e-8, "λ={l} z={z}");
            }
        }
    }

    #[test]
    fn histogram_of_gaussian_sample() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let xs: Vec<f64> = (0..1_000_000).map(|_| StandardNormal.sample(&mut rng)).collect();
        let h = Histogram::freedman_diaconis(&xs).unwrap();
        let nu = MeasureArg::Histogram(h);
        assert!(relative_entropy_to_gaussian(&nu, 1.0) <= 0.02);
        assert!((nu.second_moment() - 1.0).abs() < 0.01);
        let half = nu.scaled(2.0);
        assert!((half.second_moment() - nu.second_moment() / 4.0).abs() < 1e-12);
    }

    #[test]
    fn histogram_validation() {
        assert!(Histogram::new(vec![0.0, 1.0], vec![1.0]).is_ok());
        assert!(Histogram::new(vec![0.0, 1.0], vec![0.5]).is_err());
        assert!(Histogram::new(vec![1.0, 0.0], vec![1.0]).is_err());
        let u = Histogram::new(vec![-1.0, 1.0], vec![1.0]).unwrap();
        assert!((u.entropy() - 2f64.ln()).abs() < 1e-15);
        assert!((u.abs_moment(2.0) - 1.0 / 3.0).abs() < 1e-15);
    }
}
