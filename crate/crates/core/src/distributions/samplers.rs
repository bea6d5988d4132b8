use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use super::OrliczFunction;
use crate::error::{invalid, Error, Result};

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("p must be at least 1, got {p}")))
    }
}

/// Uniform on `(0, 1]`.
pub(crate) fn unit_open_left<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// I.i.d. draws with density proportional to `exp(-|x|^p / p)`.
pub fn sample_pgn<R: Rng + ?Sized>(p: f64, n: usize, rng: &mut R) -> Result<Vec<f64>> {
    check_p(p)?;
    let g = Gamma::new(1.0 / p, 1.0).map_err(|e| invalid(e.to_string()))?;
    Ok((0..n)
        .map(|_| {
            let r = (p * g.sample(rng)).powf(1.0 / p);
            if rng.random::<bool>() {
                r
            } else {
                -r
            }
        })
        .collect())
}

/// Uniform draw from `n^{1/p} B_p^n`.
pub fn sample_lp_ball<R: Rng + ?Sized>(p: f64, n: usize, rng: &mut R) -> Result<Vec<f64>> {
    check_p(p)?;
    if n == 0 {
        return Err(Error::InvalidDims { n, k: 0 });
    }
    let mut xi = sample_pgn(p, n, rng)?;
    let norm = xi.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p);
    let radius = (n as f64).powf(1.0 / p);
    let scale = radius * unit_open_left(rng).powf(1.0 / n as f64) / norm;
    for x in xi.iter_mut() {
        *x *= scale;
    }
    let out = xi.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p);
    assert!(out <= radius * (1.0 + 1e-12), "ℓ_p ball sample escaped the body");
    Ok(xi)
}

/// Coordinate hit-and-run on `{x : Σ V(x_i) ≤ n}`.
#[derive(Debug, Clone)]
pub struct OrliczChain {
    v: OrliczFunction,
    x: Vec<f64>,
    vals: Vec<f64>,
    total: f64,
    moves: usize,
}

impl OrliczChain {
    /// Chain started at the origin.
    pub fn new(v: OrliczFunction, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDims { n, k: 0 });
        }
        Ok(OrliczChain { v, x: vec![0.0; n], vals: vec![0.0; n], total: 0.0, moves: 0 })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn state(&self) -> &[f64] {
        &self.x
    }

    /// `Σ V(x_i)` at the current state.
    pub fn load(&self) -> f64 {
        self.total
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()> {
        let n = self.x.len();
        let i = rng.random_range(0..n);
        let budget = (n as f64 - (self.total - self.vals[i])).max(0.0);
        let t = self.v.inverse(budget);
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::DegenerateBody(format!("conditional chord collapsed (budget {budget})")));
        }
        let xi = if t > 0.0 { rng.random_range(-t..=t) } else { 0.0 };
        let vi = self.v.eval(xi);
        if !vi.is_finite() {
            return Err(Error::DegenerateBody(format!("V is infinite inside the chord at {xi}")));
        }
        self.total += vi - self.vals[i];
        self.x[i] = xi;
        self.vals[i] = vi;
        self.moves += 1;
        if self.moves % n == 0 {
            self.total = self.vals.iter().sum();
        }
        Ok(())
    }

    pub fn run<R: Rng + ?Sized>(&mut self, moves: usize, rng: &mut R) -> Result<()> {
        for _ in 0..moves {
            self.step(rng)?;
        }
        let n = self.x.len() as f64;
        assert!(self.vals.iter().sum::<f64>() <= n * (1.0 + 1e-12), "Orlicz chain left the body");
        Ok(())
    }
}

/// Default burn-in in sweeps of `n` coordinate moves.
pub const ORLICZ_BURNIN_SWEEPS: usize = 10;

/// Approximate uniform draw from the Orlicz ball: `burnin` sweeps of `n` moves, then `thin` moves.
pub fn sample_orlicz_ball<R: Rng + ?Sized>(
    v: &OrliczFunction,
    n: usize,
    burnin: usize,
    thin: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if burnin == 0 || thin == 0 {
        return Err(invalid("burnin and thin must be at least 1"));
    }
    let mut chain = OrliczChain::new(v.clone(), n)?;
    chain.run(burnin * n + thin, rng)?;
    Ok(chain.x)
}

/// One-dimensional law of the coordinates of a product measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Marginal {
    Normal,
    Rademacher,
    PointMass(f64),
}

impl Marginal {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Marginal::Normal => Distribution::<f64>::sample(&StandardNormal, rng),
            Marginal::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            Marginal::PointMass(a) => a,
        }
    }
}

pub fn sample_product<R: Rng + ?Sized>(marginal: Marginal, n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| marginal.sample(rng)).collect()
}

pub(crate) fn check_mixture(variances: &[f64], weights: &[f64]) -> Result<()> {
    if variances.is_empty() || variances.len() != weights.len() {
        return Err(Error::DimMismatch { expected: variances.len(), got: weights.len() });
    }
    if variances.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(invalid("mixture variances must be positive"));
    }
    let total: f64 = weights.iter().sum();
    if weights.iter().any(|w| !(*w >= 0.0)) || (total - 1.0).abs() > 1e-9 {
        return Err(invalid("mixture weights must form a probability vector"));
    }
    Ok(())
}

pub(crate) fn pick_component<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let u = rng.random::<f64>();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(0)
}

/// Scale mixture: one component per vector, then `n` i.i.d. `N(0, σ²)` coordinates.
pub fn sample_gaussian_mixture<R: Rng + ?Sized>(
    variances: &[f64],
    weights: &[f64],
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    check_mixture(variances, weights)?;
    let s = variances[pick_component(weights, rng)].sqrt();
    Ok((0..n).map(|_| s * Distribution::<f64>::sample(&StandardNormal, rng)).collect())
}
