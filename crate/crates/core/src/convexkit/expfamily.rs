use super::quad::{moments2, Moments2};
use super::Interval;
use crate::error::{Error, Result};
use crate::tolerances::QUAD_TOL;

const THETA_CAP: f64 = 1e7;

/// Two-parameter exponential family `exp(base(x) + θ·φ(x))` over `domain`.
///
/// Its conjugate `sup_θ { θ·y - log Z(θ) }` is computed by damped Newton steps on
/// the moment map; each quadrature pass yields `log Z`, the mean and the covariance.
pub(crate) struct ExpFamily2<'a> {
    pub base: &'a dyn Fn(f64) -> f64,
    pub phi: &'a dyn Fn(f64) -> [f64; 2],
    pub domain: Interval,
    pub breaks: &'a [f64],
    pub feasible: &'a dyn Fn([f64; 2]) -> bool,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Conjugate {
    pub value: f64,
    pub theta: [f64; 2],
}

impl ExpFamily2<'_> {
    pub fn moments(&self, th: [f64; 2]) -> Result<Moments2> {
        let g = |x: f64| {
            let [a, b] = (self.phi)(x);
            let mut v = (self.base)(x);
            if th[0] != 0.0 {
                v += th[0] * a;
            }
            if th[1] != 0.0 {
                v += th[1] * b;
            }
            v
        };
        moments2(&g, self.phi, self.domain, self.breaks, QUAD_TOL)
    }

    pub fn conjugate(&self, y: [f64; 2], init: [f64; 2]) -> Result<Conjugate> {
        if !(self.feasible)(init) {
            return Err(Error::InvalidParameter("infeasible starting parameter".into()));
        }
        let mut th = init;
        let mut m = self.moments(th)?;
        let mut obj = th[0] * y[0] + th[1] * y[1] - m.log_z;
        for _ in 0..300 {
            let g = [y[0] - m.mean[0], y[1] - m.mean[1]];
            let [[a, b], [_, d]] = m.cov;
            let ridge = 1e-14 * (a + d).max(f64::MIN_POSITIVE);
            let (a, d) = (a + ridge, d + ridge);
            let det = a * d - b * b;
            if !(det > 0.0) {
                return Err(Error::Diverging("degenerate covariance".into()));
            }
            let step = [(d * g[0] - b * g[1]) / det, (a * g[1] - b * g[0]) / det];
            let dec = g[0] * step[0] + g[1] * step[1];
            if dec <= 1e-14 * (1.0 + obj.abs()) {
                break;
            }
            let mut alpha = 1.0;
            let mut accepted = false;
            while alpha > 1e-6 {
                let cand = [th[0] + alpha * step[0], th[1] + alpha * step[1]];
                if (self.feasible)(cand) {
                    if let Ok(mc) = self.moments(cand) {
                        let oc = cand[0] * y[0] + cand[1] * y[1] - mc.log_z;
                        if oc.is_finite() && oc >= obj + 0.25 * alpha * dec {
                            th = cand;
                            m = mc;
                            obj = oc;
                            accepted = true;
                            break;
                        }
                    }
                }
                alpha *= 0.5;
            }
            if th[0].abs().max(th[1].abs()) > THETA_CAP {
                return Err(Error::Diverging("natural parameter escapes".into()));
            }
            if !accepted {
                break;
            }
        }
        Ok(Conjugate { value: obj, theta: th })
    }
}
