use crate::error::{invalid, Error, Result};

/// How the number of projection directions `k_n` grows with `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    Constant { k: usize },
    /// `k_n = ⌈n^α⌉`, `0 < α < 1`.
    Sublinear { alpha: f64 },
    /// `k_n ~ λ n`, `0 < λ ≤ 1`.
    Linear { lambda: f64 },
}

impl Regime {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Regime::Constant { k } if k == 0 => Err(invalid("k must be at least 1")),
            Regime::Sublinear { alpha } if !(alpha > 0.0 && alpha < 1.0) => {
                Err(invalid(format!("α must lie in (0, 1), got {alpha}")))
            }
            Regime::Linear { lambda } if !(lambda > 0.0 && lambda <= 1.0) => {
                Err(invalid(format!("λ must lie in (0, 1], got {lambda}")))
            }
            _ => Ok(()),
        }
    }

    pub fn k_n(&self, n: usize) -> Result<usize> {
        self.validate()?;
        let k = match *self {
            Regime::Constant { k } => k,
            Regime::Sublinear { alpha } => ((n as f64).powf(alpha) - 1e-9).ceil().max(1.0) as usize,
            Regime::Linear { lambda } => ((lambda * n as f64 - 1e-9).ceil() as usize).max(1),
        };
        if k > n {
            return Err(Error::InvalidDims { n, k });
        }
        Ok(k)
    }
}
