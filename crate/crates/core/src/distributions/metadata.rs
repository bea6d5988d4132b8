use std::f64::INFINITY;

use super::{DistributionSpec, Marginal, Regime};
use crate::error::{Error, Result};
use crate::orlicz::{orlicz_bstar, orlicz_log_volume, orlicz_rate_with_volume};
use crate::ratefn::{chi_square_rate, mp, rate_lp_norm, RateFunction, Speed};

const EXPONENT_TOL: f64 = 1e-9;

/// Limit of `s_n / k_n` in the sublinear ℓ_p cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RCase {
    Zero,
    Pos(f64),
    Inf,
}

/// Which hypothesis on the radial part a family satisfies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AssumptionTag {
    A,
    AStar,
    B,
    C(RCase),
}

/// Speed, radial rate function and its centre for a (family, regime) pair.
#[derive(Debug, Clone)]
pub struct LdpMetadata {
    pub speed: Speed,
    pub jx: RateFunction,
    /// Unique zero of `jx`, when it exists.
    pub m: Option<f64>,
    /// Concentration point of `‖X‖₂/√n`.
    pub shell_center: Option<f64>,
    pub assumption: AssumptionTag,
}

impl LdpMetadata {
    pub fn speed_at(&self, n: usize, k: usize) -> f64 {
        self.speed.eval(n as f64, k as f64)
    }
}

fn power_rate(p: f64) -> RateFunction {
    RateFunction::closed_form(format!("x^{p}/{p}"), Some(0.0), move |x| if x >= 0.0 { x.powf(p) / p } else { INFINITY })
}

fn recentred_power_rate(p: f64) -> RateFunction {
    let m = mp(p);
    RateFunction::closed_form(format!("((x^2-m^2)_+)^({p}/2)/{p}"), Some(m), move |x| {
        if x >= m {
            (x * x - m * m).max(0.0).powf(p / 2.0) / p
        } else {
            INFINITY
        }
    })
}

fn full_speed(jx: RateFunction, m: Option<f64>, shell: Option<f64>) -> LdpMetadata {
    LdpMetadata { speed: Speed::LINEAR, jx, m, shell_center: shell, assumption: AssumptionTag::AStar }
}

/// Families whose scaled norm satisfies an LDP at speed `n`.
fn speed_n_metadata(dist: &DistributionSpec) -> Result<LdpMetadata> {
    Ok(match dist {
        DistributionSpec::LpBall { p } if *p == 2.0 => {
            let jx = RateFunction::closed_form("-log x", Some(1.0), |x| if x > 0.0 && x <= 1.0 { -x.ln() } else { INFINITY });
            full_speed(jx, Some(1.0), Some(1.0))
        }
        DistributionSpec::LpBall { p } => {
            let p = *p;
            let m = mp(p);
            let jx = RateFunction::variational(format!("lp-norm rate (p = {p})"), Some(m), move |x| {
                rate_lp_norm(p, x).unwrap_or(INFINITY)
            });
            full_speed(jx, Some(m), Some(m))
        }
        DistributionSpec::Product(Marginal::Normal) => {
            let jx = RateFunction::closed_form("chi2(x^2)", Some(1.0), |x| if x >= 0.0 { chi_square_rate(x * x) } else { INFINITY });
            full_speed(jx, Some(1.0), Some(1.0))
        }
        DistributionSpec::Product(Marginal::Rademacher) => full_speed(RateFunction::degenerate(1.0), Some(1.0), Some(1.0)),
        DistributionSpec::Product(Marginal::PointMass(a)) => {
            let m = a.abs();
            full_speed(RateFunction::degenerate(m), Some(m), Some(m))
        }
        DistributionSpec::GaussianMixture { variances, weights } => {
            let scales: Vec<f64> = variances.iter().map(|v| v.sqrt()).collect();
            let heavy = weights
                .iter()
                .enumerate()
                .fold(0, |best, (i, w)| if *w > weights[best] { i } else { best });
            let single = scales.iter().all(|s| (s - scales[0]).abs() <= 1e-12 * scales[0]);
            let unique = single.then_some(scales[0]);
            let support: Vec<f64> = scales.iter().zip(weights).filter(|(_, w)| **w > 0.0).map(|(s, _)| *s).collect();
            let jx = RateFunction::closed_form("min_i chi2(x^2/σ_i^2)", unique, move |x| {
                if x >= 0.0 {
                    support.iter().map(|s| chi_square_rate((x / s).powi(2))).fold(INFINITY, f64::min)
                } else {
                    INFINITY
                }
            });
            full_speed(jx, unique, Some(scales[heavy]))
        }
        DistributionSpec::OrliczBall { v, .. } => {
            let (_, m) = orlicz_bstar(v)?;
            let lv = orlicz_log_volume(v)?;
            let vc = v.clone();
            let jx = RateFunction::variational(format!("orlicz rate ({})", v.label()), Some(m), move |z| {
                orlicz_rate_with_volume(&vc, lv, z).unwrap_or(INFINITY)
            });
            full_speed(jx, Some(m), Some(m))
        }
    })
}

/// Metadata for `n^{-1/2} ‖AᵀX‖₂` (and the `n^{-1/q}` norms built on it).
pub fn ldp_metadata(dist: &DistributionSpec, regime: &Regime) -> Result<LdpMetadata> {
    dist.validate()?;
    regime.validate()?;
    let p = match dist {
        DistributionSpec::LpBall { p } if *p < 2.0 => *p,
        _ => return speed_n_metadata(dist),
    };
    let beta = 2.0 * p / (2.0 + p);
    let m = mp(p);
    let light = |speed, assumption| LdpMetadata { speed, jx: power_rate(p), m: Some(0.0), shell_center: Some(m), assumption };
    Ok(match *regime {
        Regime::Constant { .. } => light(Speed::n_pow(beta), AssumptionTag::B),
        Regime::Sublinear { alpha } if alpha < beta - EXPONENT_TOL => light(Speed::n_pow(beta), AssumptionTag::C(RCase::Inf)),
        Regime::Sublinear { alpha } if alpha <= beta + EXPONENT_TOL => {
            light(Speed::n_pow(beta), AssumptionTag::C(RCase::Pos(1.0)))
        }
        Regime::Sublinear { .. } => light(Speed { n_exp: p, k_exp: -p / 2.0 }, AssumptionTag::C(RCase::Zero)),
        Regime::Linear { .. } => LdpMetadata {
            speed: Speed::n_pow(p / 2.0),
            jx: recentred_power_rate(p),
            m: Some(m),
            shell_center: Some(m),
            assumption: AssumptionTag::A,
        },
    })
}

/// Metadata for `k_n^{-1/q} ‖AᵀX‖_q` in the sublinear regime: the radial LDP of `‖X‖₂/√n`.
pub fn ldp_metadata_kn(dist: &DistributionSpec, regime: &Regime) -> Result<LdpMetadata> {
    dist.validate()?;
    regime.validate()?;
    if !matches!(regime, Regime::Sublinear { .. }) {
        return Err(Error::Unsupported("k_n-scaled norms are defined for the sublinear regime".into()));
    }
    match dist {
        DistributionSpec::OrliczBall { .. } => {
            Err(Error::Unsupported("k_n-scaled norms of Orlicz balls are not covered".into()))
        }
        DistributionSpec::LpBall { p } if *p < 2.0 => {
            let m = mp(*p);
            Ok(LdpMetadata {
                speed: Speed::n_pow(p / 2.0),
                jx: recentred_power_rate(*p),
                m: Some(m),
                shell_center: Some(m),
                assumption: AssumptionTag::A,
            })
        }
        _ => speed_n_metadata(dist),
    }
}
