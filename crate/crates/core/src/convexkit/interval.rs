use std::f64::INFINITY;

/// An interval of the extended real line, possibly half-open or unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub const REAL: Interval = Interval {
        lo: -INFINITY,
        hi: INFINITY,
        lo_closed: false,
        hi_closed: false,
    };

    pub fn open(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, lo_closed: false, hi_closed: false }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, lo_closed: lo.is_finite(), hi_closed: hi.is_finite() }
    }

    /// `(-inf, hi)`.
    pub fn below(hi: f64) -> Self {
        Interval::open(-INFINITY, hi)
    }

    /// `(lo, inf)`.
    pub fn above(lo: f64) -> Self {
        Interval::open(lo, INFINITY)
    }

    pub fn contains(&self, t: f64) -> bool {
        if t.is_nan() {
            return false;
        }
        let lo_ok = if self.lo_closed { t >= self.lo } else { t > self.lo };
        let hi_ok = if self.hi_closed { t <= self.hi } else { t < self.hi };
        lo_ok && hi_ok
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo < self.hi || (self.lo == self.hi && self.lo_closed && self.hi_closed))
    }

    /// A point well inside the interval, preferring the origin.
    pub fn interior_point(&self) -> f64 {
        if self.lo < 0.0 && self.hi > 0.0 {
            0.0
        } else if self.lo.is_finite() && self.hi.is_finite() {
            0.5 * (self.lo + self.hi)
        } else if self.lo.is_finite() {
            self.lo + 1.0
        } else {
            self.hi - 1.0
        }
    }
}

/// A real function together with its effective domain; outside the domain it is `+inf`.
pub struct Fn1D<F> {
    f: F,
    domain: Interval,
}

impl<F: Fn(f64) -> f64> Fn1D<F> {
    pub fn new(f: F, domain: Interval) -> Self {
        Fn1D { f, domain }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if !self.domain.contains(t) {
            return INFINITY;
        }
        let v = (self.f)(t);
        if v.is_nan() {
            INFINITY
        } else {
            v
        }
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }
}
