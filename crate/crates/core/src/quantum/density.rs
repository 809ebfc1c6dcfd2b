use crate::error::{Error, Result};
use crate::linalg::{
    self, eigh, hermitian_deviation, is_finite, ComplexMatrix, ComplexVector, Eigh, RANK_TOL,
};

/// Default Hermiticity tolerance for user-supplied matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Default per-dimension clipping tolerance for slightly negative eigenvalues.
pub const CLIP_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-8;

/// A validated quantum state with its cached spectral decomposition.
///
/// The spectrum is clipped (small negative eigenvalues become zero, as do
/// eigenvalues below [`linalg::SUPPORT_TOL`]) and renormalized; the stored
/// matrix is rebuilt from that spectrum so that matrix and decomposition
/// always agree.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    eig: Eigh,
}

impl DensityMatrix {
    /// Validates with the default clipping tolerance.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        validate_density(&matrix, CLIP_TOL)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Eigenvalues, descending.
    pub fn spectrum(&self) -> &[f64] {
        &self.eig.values
    }

    pub fn eigen(&self) -> &Eigh {
        &self.eig
    }

    /// Eigenvector belonging to `spectrum()[k]`.
    pub fn eigenvector(&self, k: usize) -> ComplexVector {
        self.eig.vector(k)
    }

    pub fn rank(&self) -> usize {
        self.eig.values.iter().filter(|&&l| l > RANK_TOL).count()
    }

    /// `ρ^p` on the support, for any real exponent (`0^p := 0`).
    pub fn power(&self, p: f64) -> ComplexMatrix {
        self.eig.power(p)
    }

    /// `tr ρ^p` over the support.
    pub fn trace_power(&self, p: f64) -> f64 {
        self.eig.values.iter().filter(|&&l| l > 0.0).map(|l| l.powf(p)).sum()
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new(linalg::identity(dim).scale(1.0 / dim as f64)).expect("I/d is a valid state")
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) nonzero vector.
    pub fn pure(psi: &ComplexVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidDistribution("zero or non-finite state vector".into()));
        }
        let v = psi.unscale(norm);
        Self::new(linalg::outer(&v, &v))
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let d = probs.len();
        let m = ComplexMatrix::from_fn(d, d, |i, j| {
            if i == j {
                linalg::real(probs[i])
            } else {
                linalg::real(0.0)
            }
        });
        Self::new(m)
    }
}

/// Checks that `matrix` is a density matrix and caches its eigensystem.
///
/// Eigenvalues in `[-tol·d, 0)` are clipped to zero and the spectrum is
/// renormalized; anything more negative is rejected.
pub fn validate_density(matrix: &ComplexMatrix, tol: f64) -> Result<DensityMatrix> {
    let (rows, cols) = matrix.shape();
    if rows != cols || rows == 0 {
        return Err(Error::NotSquare { rows, cols });
    }
    if !is_finite(matrix) {
        return Err(Error::NonFinite);
    }
    let deviation = hermitian_deviation(matrix);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let trace = linalg::trace(matrix).re;
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::TraceNotOne { trace });
    }
    let d = rows as f64;
    let mut eig = eigh(matrix);
    if let Some(&min) = eig.values.last() {
        if min < -tol * d {
            return Err(Error::NotPsd { eigenvalue: min });
        }
    }
    let zero = linalg::SUPPORT_TOL * eig.values[0].abs().max(1.0);
    for l in eig.values.iter_mut() {
        if *l <= zero {
            *l = 0.0;
        }
    }
    let total: f64 = eig.values.iter().sum();
    for l in eig.values.iter_mut() {
        *l /= total;
    }
    let rebuilt = eig.apply(|l| l);
    Ok(DensityMatrix { matrix: rebuilt, eig })
}

/// `ρ^β` for `β > 0`, with `0^β := 0`.
pub fn matrix_power(rho: &DensityMatrix, beta: f64) -> Result<ComplexMatrix> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::OutOfRange(format!("matrix power exponent {beta} must be finite and > 0")));
    }
    Ok(rho.power(beta))
}
