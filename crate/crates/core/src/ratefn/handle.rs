use std::f64::INFINITY;
use std::fmt;
use std::sync::Arc;

/// How a rate function is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateKind {
    ClosedForm,
    Variational,
    /// `0` at the point, `+inf` elsewhere.
    Degenerate(f64),
}

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// An evaluable extended-real rate function of one real argument.
#[derive(Clone)]
pub struct RateFunction {
    kind: RateKind,
    eval: Eval,
    center: Option<f64>,
    label: String,
}

impl RateFunction {
    pub fn closed_form(label: impl Into<String>, center: Option<f64>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        RateFunction { kind: RateKind::ClosedForm, eval: Arc::new(f), center, label: label.into() }
    }

    pub fn variational(label: impl Into<String>, center: Option<f64>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        RateFunction { kind: RateKind::Variational, eval: Arc::new(f), center, label: label.into() }
    }

    pub fn degenerate(m: f64) -> Self {
        RateFunction {
            kind: RateKind::Degenerate(m),
            eval: Arc::new(move |x| if (x - m).abs() <= 1e-12 * m.abs().max(1.0) { 0.0 } else { INFINITY }),
            center: Some(m),
            label: format!("degenerate({m})"),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x.is_nan() {
            return INFINITY;
        }
        let v = (self.eval)(x);
        if v.is_nan() {
            INFINITY
        } else {
            v
        }
    }

    pub fn kind(&self) -> RateKind {
        self.kind
    }

    /// The point where the rate vanishes, when it is unique and known.
    pub fn center(&self) -> Option<f64> {
        self.center
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degenerate_at(&self) -> Option<f64> {
        match self.kind {
            RateKind::Degenerate(m) => Some(m),
            _ => None,
        }
    }
}

impl fmt::Debug for RateFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RateFunction")
            .field("kind", &self.kind)
            .field("center", &self.center)
            .field("label", &self.label)
            .finish()
    }
}
