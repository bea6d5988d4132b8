//! Haar-distributed orthonormal frames, projection, and Gaussian-ratio
//! shortcuts for the law of projected norms and coordinates.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{invalid, Error, Result};

/// An `n × k` matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    entries: DMatrix<f64>,
}

impl Frame {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn k(&self) -> usize {
        self.entries.ncols()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// `‖AᵀA - I_k‖_F`.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.entries.transpose() * &self.entries;
        (g - DMatrix::<f64>::identity(self.k(), self.k())).norm()
    }

    /// Frame `QA` for an orthogonal `n × n` matrix `Q`.
    pub fn rotated(&self, q: &DMatrix<f64>) -> Result<Frame> {
        if q.nrows() != self.n() || q.ncols() != self.n() {
            return Err(Error::DimMismatch { expected: self.n(), got: q.nrows() });
        }
        Ok(Frame { entries: q * &self.entries })
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Distribution::<f64>::sample(&StandardNormal, rng)
}

/// Gaussian matrix followed by a thin QR with `diag(R) > 0`.
pub fn haar_frame<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Frame> {
    if k == 0 || k > n {
        return Err(Error::InvalidDims { n, k });
    }
    let g = DMatrix::<f64>::from_fn(n, k, |_, _| gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..k {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    Ok(Frame { entries: q })
}

/// `Aᵀx`.
pub fn project(a: &Frame, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != a.n() {
        return Err(Error::DimMismatch { expected: a.n(), got: x.len() });
    }
    let v = DVector::from_column_slice(x);
    Ok((a.entries.transpose() * v).iter().copied().collect())
}

/// `‖ζ^{(n)}‖₂²` given the first `k` coordinates, the rest through a χ²_{n-k} draw.
fn total_square<R: Rng + ?Sized>(n: usize, head: &[f64], rng: &mut R) -> Result<f64> {
    let s: f64 = head.iter().map(|z| z * z).sum();
    let rest = n - head.len();
    if rest == 0 {
        return Ok(s);
    }
    let g = Gamma::new(rest as f64 / 2.0, 2.0).map_err(|e| invalid(e.to_string()))?;
    Ok(s + g.sample(rng))
}

/// One draw of `n^{-1/q} ‖AᵀX‖_q` given `‖X‖₂ = xnorm2`, from Gaussian vectors only.
pub fn projected_qnorm_fast<R: Rng + ?Sized>(n: usize, k: usize, q: f64, xnorm2: f64, rng: &mut R) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(invalid(format!("q must be at least 1, got {q}")));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidDims { n, k });
    }
    if !(xnorm2 >= 0.0) {
        return Err(invalid(format!("norm must be non-negative, got {xnorm2}")));
    }
    let nf = n as f64;
    if k == n && q == 2.0 {
        return Ok(xnorm2 / nf.sqrt());
    }
    if xnorm2 == 0.0 {
        return Ok(0.0);
    }
    let head: Vec<f64> = (0..k).map(|_| gaussian(rng)).collect();
    let qn = if q == 2.0 {
        head.iter().map(|z| z * z).sum::<f64>().sqrt()
    } else {
        head.iter().map(|z| z.abs().powf(q)).sum::<f64>().powf(1.0 / q)
    };
    let total = total_square(n, &head, rng)?;
    Ok(nf.powf(-1.0 / q) * qn * xnorm2 / total.sqrt())
}

/// Sorted atoms of a finite uniform measure.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    atoms: Vec<f64>,
}

impl EmpiricalMeasure {
    pub fn new(mut atoms: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(invalid("empirical measure needs at least one atom"));
        }
        if atoms.iter().any(|a| !a.is_finite()) {
            return Err(invalid("empirical measure atoms must be finite"));
        }
        atoms.sort_by(f64::total_cmp);
        Ok(EmpiricalMeasure { atoms })
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().sum::<f64>() / self.atoms.len() as f64
    }

    pub fn second_moment(&self) -> f64 {
        self.atoms.iter().map(|a| a * a).sum::<f64>() / self.atoms.len() as f64
    }

    /// Empirical CDF `#{a ≤ x} / len`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.atoms.partition_point(|a| *a <= x) as f64 / self.atoms.len() as f64
    }
}

/// Coordinates of `AᵀX` given `‖X‖₂ = xnorm2`: `xnorm2 · ζ_j / ‖ζ^{(n)}‖₂`, `j ≤ k`.
pub fn projected_empirical_fast<R: Rng + ?Sized>(n: usize, k: usize, xnorm2: f64, rng: &mut R) -> Result<EmpiricalMeasure> {
    if k == 0 || k > n {
        return Err(Error::InvalidDims { n, k });
    }
    if !(xnorm2 >= 0.0) {
        return Err(invalid(format!("norm must be non-negative, got {xnorm2}")));
    }
    let head: Vec<f64> = (0..k).map(|_| gaussian(rng)).collect();
    let total = total_square(n, &head, rng)?;
    let c = xnorm2 / total.sqrt();
    EmpiricalMeasure::new(head.into_iter().map(|z| c * z).collect())
}
