use crate::distributions::{ldp_metadata, ldp_metadata_kn, AssumptionTag, DistributionSpec, LdpMetadata, RCase, Regime};
use crate::error::{invalid, Error, Result};
use crate::ratefn::{
    rate_constant_regime, rate_linear_empirical, rate_linear_qnorm, rate_sublinear_empirical, rate_sublinear_norm,
    rate_sublinear_qnorm, ConstantVariant, LinearCase, MeasureArg, SpeedCase, SublinearNormCase,
};

/// Projected statistic whose tail is estimated or predicted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    /// `n^{-1/q} ‖AᵀX‖_q`; `n^{-1/2} ‖AᵀX‖_q` when `k` is fixed.
    Norm { q: f64 },
    /// `k_n^{-1/q} ‖AᵀX‖_q`, sublinear regime only.
    NormKn { q: f64 },
    /// Empirical measure of the projected coordinates, evaluated at `N(0, x²)`.
    Empirical,
}

/// Relative band around 1 within which `s_n / k_n` counts as balanced.
const BALANCED_BAND: f64 = 0.05;

/// Compares `s_n` with `k_n` at the largest ladder point.
pub fn speed_case_on_ladder(meta: &LdpMetadata, regime: &Regime, ladder: &[usize]) -> Result<SpeedCase> {
    let n = *ladder.iter().max().ok_or_else(|| invalid("n ladder is empty"))?;
    let k = regime.k_n(n)?;
    let r = meta.speed_at(n, k) / k as f64;
    Ok(if (r - 1.0).abs() <= BALANCED_BAND {
        SpeedCase::Balanced
    } else if r > 1.0 {
        SpeedCase::Fast
    } else {
        SpeedCase::Slow
    })
}

fn centre(meta: &LdpMetadata) -> Result<f64> {
    meta.m.ok_or_else(|| Error::Unsupported("radial rate has no unique centre".into()))
}

fn linear_case(meta: &LdpMetadata) -> LinearCase {
    match meta.assumption {
        AssumptionTag::AStar => LinearCase::Full,
        _ => LinearCase::Slow,
    }
}

/// Speed at which `quantity` is rescaled for sample size `n`.
pub(crate) fn speed(dist: &DistributionSpec, regime: &Regime, quantity: Quantity, n: usize, k: usize) -> Result<f64> {
    Ok(match (quantity, regime) {
        (Quantity::Norm { .. }, _) | (Quantity::Empirical, Regime::Linear { .. }) => {
            ldp_metadata(dist, regime)?.speed_at(n, k)
        }
        (_, Regime::Sublinear { .. }) => ldp_metadata_kn(dist, regime)?.speed_at(n, k).min(k as f64),
        _ => return Err(Error::Unsupported("quantity needs a growing number of directions".into())),
    })
}

/// Theoretical rate at `x` for the (family, regime, quantity) triple.
///
/// `ladder` only matters where the formula depends on how `s_n` compares with `k_n`.
pub fn predict_rate(dist: &DistributionSpec, regime: &Regime, quantity: Quantity, x: f64, ladder: &[usize]) -> Result<f64> {
    match quantity {
        Quantity::Norm { q } => {
            if !(q >= 1.0) {
                return Err(invalid(format!("q must be at least 1, got {q}")));
            }
            let meta = ldp_metadata(dist, regime)?;
            match *regime {
                Regime::Constant { k } => {
                    let variant = match meta.assumption {
                        AssumptionTag::B => ConstantVariant::B,
                        _ => ConstantVariant::AStar,
                    };
                    let arg = if q == 2.0 { x } else { x * (k as f64).powf(0.5 - 1.0 / q).min(1.0) };
                    Ok(rate_constant_regime(&meta.jx, variant, arg))
                }
                Regime::Sublinear { .. } => {
                    if q != 2.0 {
                        return Err(Error::Unsupported("use norm_kn for q ≠ 2 with sublinear k_n".into()));
                    }
                    let case = match meta.assumption {
                        AssumptionTag::C(RCase::Zero) => SublinearNormCase::R0,
                        AssumptionTag::C(RCase::Pos(r)) => SublinearNormCase::RPos(r),
                        AssumptionTag::C(RCase::Inf) => SublinearNormCase::RInf,
                        _ => SublinearNormCase::AStar,
                    };
                    Ok(rate_sublinear_norm(case, &meta.jx, x))
                }
                Regime::Linear { lambda } => rate_linear_qnorm(q, lambda, &meta.jx, linear_case(&meta), x),
            }
        }
        Quantity::NormKn { q } => {
            let meta = ldp_metadata_kn(dist, regime)?;
            let case = speed_case_on_ladder(&meta, regime, ladder)?;
            rate_sublinear_qnorm(q, case, &meta.jx, centre(&meta)?, x)
        }
        Quantity::Empirical => {
            let nu = MeasureArg::Gaussian(x);
            match *regime {
                Regime::Sublinear { .. } => {
                    let meta = ldp_metadata_kn(dist, regime)?;
                    let case = speed_case_on_ladder(&meta, regime, ladder)?;
                    rate_sublinear_empirical(case, &meta.jx, centre(&meta)?, &nu)
                }
                Regime::Linear { lambda } => {
                    let meta = ldp_metadata(dist, regime)?;
                    rate_linear_empirical(lambda, &meta.jx, linear_case(&meta), &nu)
                }
                Regime::Constant { .. } => {
                    Err(Error::Unsupported("empirical measures need a growing number of directions".into()))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Marginal;
    use crate::ratefn::{chi_square_rate, rate_lp_projection, LpProjectionCase};

    #[test]
    fn constant_regime_predictions() {
        let d = DistributionSpec::LpBall { p: 2.0 };
        let r = predict_rate(&d, &Regime::Constant { k: 1 }, Quantity::Norm { q: 2.0 }, 0.5, &[80]).unwrap();
        assert!((r - 0.143841036225890).abs() < 1e-6);
        let d = DistributionSpec::LpBall { p: 1.0 };
        let r = predict_rate(&d, &Regime::Constant { k: 3 }, Quantity::Norm { q: 2.0 }, 1.0, &[80]).unwrap();
        assert!((r - rate_lp_projection(1.0, LpProjectionCase::Constant, 1.0).unwrap().0).abs() < 1e-6);
        // ‖y‖₁ = x with k = 4 leaves ‖y‖₂ as small as x/2.
        let g = DistributionSpec::Product(Marginal::Normal);
        let a = predict_rate(&g, &Regime::Constant { k: 4 }, Quantity::Norm { q: 1.0 }, 1.0, &[80]).unwrap();
        let b = predict_rate(&g, &Regime::Constant { k: 4 }, Quantity::Norm { q: 2.0 }, 0.5, &[80]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn kn_speed_cases() {
        let g = DistributionSpec::Product(Marginal::Normal);
        let sub = Regime::Sublinear { alpha: 0.5 };
        let meta = ldp_metadata_kn(&g, &sub).unwrap();
        assert_eq!(speed_case_on_ladder(&meta, &sub, &[100, 10_000]).unwrap(), SpeedCase::Fast);
        let r = predict_rate(&g, &sub, Quantity::NormKn { q: 2.0 }, 1.2, &[10_000]).unwrap();
        assert!((r - chi_square_rate(1.44)).abs() < 1e-8);
        let ball = DistributionSpec::LpBall { p: 1.0 };
        let meta = ldp_metadata_kn(&ball, &sub).unwrap();
        assert_eq!(speed_case_on_ladder(&meta, &sub, &[10_000]).unwrap(), SpeedCase::Balanced);
        let meta = ldp_metadata_kn(&ball, &Regime::Sublinear { alpha: 0.8 }).unwrap();
        assert_eq!(speed_case_on_ladder(&meta, &Regime::Sublinear { alpha: 0.8 }, &[10_000]).unwrap(), SpeedCase::Slow);
        assert!(predict_rate(&g, &sub, Quantity::Norm { q: 1.5 }, 1.0, &[100]).is_err());
        assert!(predict_rate(&g, &Regime::Constant { k: 2 }, Quantity::Empirical, 1.0, &[100]).is_err());
    }

    #[test]
    fn empirical_prediction_vanishes_at_centre() {
        let d = DistributionSpec::LpBall { p: 2.0 };
        let sub = Regime::Sublinear { alpha: 0.6 };
        assert!(predict_rate(&d, &sub, Quantity::Empirical, 1.0, &[10_000]).unwrap().abs() < 1e-8);
        assert!(predict_rate(&d, &sub, Quantity::Empirical, 0.8, &[10_000]).unwrap() > 0.0);
    }
}
