use std::f64::INFINITY;
use std::fmt;
use std::sync::Arc;

use crate::convexkit::Interval;
use crate::error::{invalid, Result};

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Symmetric convex `V` with `V(0) = 0`, finite on `[-w, w]` and `+inf` beyond.
#[derive(Clone)]
pub struct OrliczFunction {
    f: Eval,
    inverse: Option<Eval>,
    half_width: f64,
    label: String,
}

impl OrliczFunction {
    /// Validates `f` numerically: `V(0) = 0`, non-negativity, symmetry and convexity on a grid.
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let f: Eval = Arc::new(f);
        let half_width = infer_half_width(&*f);
        let v = OrliczFunction { f, inverse: None, half_width, label: label.into() };
        v.check()?;
        Ok(v)
    }

    /// `|x|^p`, `p ≥ 1`.
    pub fn power(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(invalid(format!("exponent must be at least 1, got {p}")));
        }
        let mut v = OrliczFunction::new(format!("abs(x)^{p}"), move |x: f64| x.abs().powf(p))?;
        v.inverse = Some(Arc::new(move |y: f64| y.powf(1.0 / p)));
        Ok(v)
    }

    pub fn cosh_minus_one() -> Self {
        OrliczFunction {
            f: Arc::new(|x: f64| x.cosh() - 1.0),
            inverse: Some(Arc::new(|y: f64| (1.0 + y).acosh())),
            half_width: INFINITY,
            label: "cosh(x) - 1".into(),
        }
    }

    /// Same function with `V = +inf` outside `[-w, w]`.
    pub fn truncated(mut self, w: f64) -> Result<Self> {
        if !(w > 0.0) {
            return Err(invalid(format!("half width must be positive, got {w}")));
        }
        self.half_width = self.half_width.min(w);
        Ok(self)
    }

    pub fn eval(&self, x: f64) -> f64 {
        if !(x.abs() <= self.half_width) {
            return INFINITY;
        }
        let v = (self.f)(x);
        if v.is_nan() {
            INFINITY
        } else {
            v
        }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn domain(&self) -> Interval {
        if self.half_width.is_finite() {
            Interval::closed(-self.half_width, self.half_width)
        } else {
            Interval::REAL
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Largest `t ≥ 0` with `V(t) ≤ y`.
    pub fn inverse(&self, y: f64) -> f64 {
        if !(y >= 0.0) {
            return 0.0;
        }
        if let Some(inv) = &self.inverse {
            let t = inv(y).min(self.half_width);
            if self.eval(t) <= y {
                return t;
            }
        }
        if self.half_width.is_finite() && self.eval(self.half_width) <= y {
            return self.half_width;
        }
        let mut hi = 1.0f64.min(self.half_width);
        while self.eval(hi) <= y {
            hi *= 2.0;
            if hi > self.half_width {
                hi = self.half_width;
                break;
            }
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(mid) <= y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    fn ratios(&self) -> Vec<f64> {
        (0..=10).map(|j| self.eval(2f64.powi(j)) / 4f64.powi(j)).collect()
    }

    /// `V(x)/x²` increases along `x = 1, 2, …, 2^{10}` from some point on.
    pub fn is_superquadratic(&self) -> bool {
        let r = self.ratios();
        r.windows(2).skip(r.len() - 4).all(|w| w[1] > w[0] || (w[1] == INFINITY && w[0] == INFINITY))
    }

    /// Warning text when growth is too slow to trust the superquadratic analysis.
    pub fn growth_advisory(&self) -> Option<String> {
        let r = self.ratios();
        if self.is_superquadratic() && r[r.len() - 1] > 1e3 {
            None
        } else {
            Some(format!("V(x)/x^2 at x = 1024 is {:.3e}; V may not be superquadratic", r[r.len() - 1]))
        }
    }

    fn check(&self) -> Result<()> {
        let z = self.eval(0.0);
        if !(z.abs() <= 1e-12) {
            return Err(invalid(format!("V(0) = {z}, expected 0")));
        }
        let w = self.half_width.min(16.0);
        let h = w / 400.0;
        for i in -400i32..=400 {
            let x = h * i as f64;
            let v = self.eval(x);
            if v < -1e-12 {
                return Err(invalid(format!("V({x}) = {v} is negative")));
            }
            let m = self.eval(-x);
            if v.is_finite() != m.is_finite() || (v.is_finite() && (v - m).abs() > 1e-9 * (1.0 + v.abs())) {
                return Err(invalid(format!("V is not symmetric at x = {x}")));
            }
            if i.abs() < 400 {
                let (a, b) = (self.eval(x - h), self.eval(x + h));
                if a.is_finite() && b.is_finite() && v.is_finite() && a + b - 2.0 * v < -1e-9 * (1.0 + v.abs()) {
                    return Err(invalid(format!("V is not convex near x = {x}")));
                }
            }
        }
        Ok(())
    }
}

fn infer_half_width(f: &dyn Fn(f64) -> f64) -> f64 {
    let finite = |x: f64| {
        let v = f(x);
        v.is_finite() && f(-x).is_finite()
    };
    let mut lo = 0.0;
    let mut x = 2f64.powi(-10);
    while x <= 2f64.powi(40) {
        if !finite(x) {
            let mut hi = x;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if finite(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return lo;
        }
        lo = x;
        x *= 2.0;
    }
    INFINITY
}

impl fmt::Debug for OrliczFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrliczFunction").field("label", &self.label).field("half_width", &self.half_width).finish()
    }
}
