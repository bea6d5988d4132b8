use rand::Rng;
use rand_distr::{Distribution, Gamma};

use super::samplers::{
    check_mixture, pick_component, sample_gaussian_mixture, sample_lp_ball, sample_product, unit_open_left, Marginal,
    OrliczChain, ORLICZ_BURNIN_SWEEPS,
};
use super::OrliczFunction;
use crate::error::{invalid, Error, Result};

/// Hit-and-run settings for Orlicz balls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainSettings {
    /// Burn-in length in sweeps of `n` coordinate moves.
    pub burnin_sweeps: usize,
    /// Coordinate moves between draws; `None` means `n`.
    pub thin: Option<usize>,
}

impl Default for ChainSettings {
    fn default() -> Self {
        ChainSettings { burnin_sweeps: ORLICZ_BURNIN_SWEEPS, thin: None }
    }
}

/// A family of high-dimensional measures, one per dimension `n`.
#[derive(Debug, Clone)]
pub enum DistributionSpec {
    /// Uniform on `n^{1/p} B_p^n`.
    LpBall { p: f64 },
    Product(Marginal),
    GaussianMixture { variances: Vec<f64>, weights: Vec<f64> },
    /// Uniform on `{x : Σ V(x_i) ≤ n}`.
    OrliczBall { v: OrliczFunction, chain: ChainSettings },
}

impl DistributionSpec {
    pub fn orlicz(v: OrliczFunction) -> Self {
        DistributionSpec::OrliczBall { v, chain: ChainSettings::default() }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DistributionSpec::LpBall { p } if !(*p >= 1.0 && p.is_finite()) => {
                Err(invalid(format!("p must be at least 1, got {p}")))
            }
            DistributionSpec::Product(Marginal::PointMass(a)) if !a.is_finite() => Err(invalid("point mass must be finite")),
            DistributionSpec::GaussianMixture { variances, weights } => check_mixture(variances, weights),
            DistributionSpec::OrliczBall { v, chain } => {
                if !v.is_superquadratic() {
                    return Err(invalid(format!("{} is not superquadratic", v.label())));
                }
                if chain.burnin_sweeps == 0 || chain.thin == Some(0) {
                    return Err(invalid("burnin and thin must be at least 1"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// One draw of the full vector.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        self.validate()?;
        match self {
            DistributionSpec::LpBall { p } => sample_lp_ball(*p, n, rng),
            DistributionSpec::Product(m) => Ok(sample_product(*m, n, rng)),
            DistributionSpec::GaussianMixture { variances, weights } => sample_gaussian_mixture(variances, weights, n, rng),
            DistributionSpec::OrliczBall { v, chain } => {
                let mut c = OrliczChain::new(v.clone(), n)?;
                c.run(chain.burnin_sweeps * n + chain.thin.unwrap_or(n), rng)?;
                Ok(c.state().to_vec())
            }
        }
    }

    /// Sampler of `‖X‖₂` in dimension `n` that avoids building the vector when the law is explicit.
    pub fn norm_sampler(&self, n: usize) -> Result<NormSampler> {
        self.validate()?;
        if n == 0 {
            return Err(Error::InvalidDims { n, k: 0 });
        }
        let chi = || Gamma::new(n as f64 / 2.0, 2.0).map_err(|e| invalid(e.to_string()));
        let kind = match self {
            DistributionSpec::LpBall { p } if *p == 2.0 => NormKind::UnitBall,
            DistributionSpec::LpBall { p } => NormKind::Lp(*p),
            DistributionSpec::Product(Marginal::Normal) => NormKind::Chi(chi()?),
            DistributionSpec::Product(Marginal::Rademacher) => NormKind::Fixed((n as f64).sqrt()),
            DistributionSpec::Product(Marginal::PointMass(a)) => NormKind::Fixed(a.abs() * (n as f64).sqrt()),
            DistributionSpec::GaussianMixture { variances, weights } => NormKind::Mixture {
                scales: variances.iter().map(|v| v.sqrt()).collect(),
                weights: weights.clone(),
                chi: chi()?,
            },
            DistributionSpec::OrliczBall { v, chain } => NormKind::Orlicz {
                chain: Box::new(OrliczChain::new(v.clone(), n)?),
                burnin: chain.burnin_sweeps * n,
                thin: chain.thin.unwrap_or(n),
                warm: false,
            },
        };
        Ok(NormSampler { n, kind })
    }
}

#[derive(Debug, Clone)]
enum NormKind {
    Fixed(f64),
    UnitBall,
    Lp(f64),
    Chi(Gamma<f64>),
    Mixture { scales: Vec<f64>, weights: Vec<f64>, chi: Gamma<f64> },
    Orlicz { chain: Box<OrliczChain>, burnin: usize, thin: usize, warm: bool },
}

/// Stateful sampler of the Euclidean norm of one family member.
#[derive(Debug, Clone)]
pub struct NormSampler {
    n: usize,
    kind: NormKind,
}

impl NormSampler {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<f64> {
        let n = self.n as f64;
        Ok(match &mut self.kind {
            NormKind::Fixed(r) => *r,
            NormKind::UnitBall => n.sqrt() * unit_open_left(rng).powf(1.0 / n),
            NormKind::Lp(p) => l2(&sample_lp_ball(*p, self.n, rng)?),
            NormKind::Chi(g) => g.sample(rng).sqrt(),
            NormKind::Mixture { scales, weights, chi } => scales[pick_component(weights, rng)] * chi.sample(rng).sqrt(),
            NormKind::Orlicz { chain, burnin, thin, warm } => {
                let moves = if *warm { *thin } else { *burnin + *thin };
                chain.run(moves, rng)?;
                *warm = true;
                l2(chain.state())
            }
        })
    }
}

fn l2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
