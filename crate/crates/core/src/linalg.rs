//! Dense complex Hermitian linear algebra on top of `nalgebra`.
//!
//! Every spectral routine here returns eigenvalues sorted in descending
//! order together with the matching orthonormal eigenvectors as columns.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Eigenvalues at or below this (relative to the largest) are treated as
/// exact zeros when forming matrix functions with non-positive exponents.
pub const SUPPORT_TOL: f64 = 1e-13;

/// Rank threshold used for `H_0` and rank-one checks.
pub const RANK_TOL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Largest `|a_ij - conj(a_ji)|`.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(m + m†) / 2`.
pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Eigh {
    pub fn vector(&self, k: usize) -> ComplexVector {
        self.vectors.column(k).into_owned()
    }

    /// `Σ f(λ_k) |v_k⟩⟨v_k|`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.vectors.nrows();
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            for i in 0..n {
                scaled[(i, k)] *= w;
            }
        }
        &scaled * self.vectors.adjoint()
    }

    /// Support threshold relative to the largest eigenvalue magnitude.
    pub fn support_threshold(&self) -> f64 {
        let scale = self.values.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
        SUPPORT_TOL * scale.max(1.0)
    }

    /// `Σ λ^p |v⟩⟨v|` over the support. Eigenvalues below the support
    /// threshold map to zero for every exponent (`0^p := 0`).
    pub fn power(&self, p: f64) -> ComplexMatrix {
        let thr = self.support_threshold();
        self.apply(|l| if l > thr { l.powf(p) } else { 0.0 })
    }

    /// Orthogonal projector onto the support.
    pub fn support_projector(&self) -> ComplexMatrix {
        self.power(0.0)
    }
}

/// Hermitian eigendecomposition. The input is symmetrized first so that
/// rounding-level asymmetry never reaches the solver.
pub fn eigh(m: &ComplexMatrix) -> Eigh {
    let sym = hermitize(m);
    let n = sym.nrows();
    if n == 0 {
        return Eigh { values: Vec::new(), vectors: sym };
    }
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Eigh { values, vectors }
}

/// `Σ λ^p |v⟩⟨v|` of a PSD matrix, restricted to its support.
pub fn psd_power(m: &ComplexMatrix, p: f64) -> ComplexMatrix {
    eigh(m).power(p)
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `Re tr(a b)` without forming the product.
pub fn trace_product_re(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc.re
}

/// Largest entry magnitude of `a - b`.
pub fn max_entry_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Spectral norm of a Hermitian matrix.
pub fn hermitian_op_norm(m: &ComplexMatrix) -> f64 {
    eigh(m).values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// `|u⟩⟨v|`.
pub fn outer(u: &ComplexVector, v: &ComplexVector) -> ComplexMatrix {
    u * v.adjoint()
}

/// Which tensor factor a partial trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

/// Partial trace of an operator on `C^{d1} ⊗ C^{d2}` (row-major index
/// `i1 * d2 + i2`).
pub fn partial_trace(
    op: &ComplexMatrix,
    dims: (usize, usize),
    keep: Keep,
) -> Result<ComplexMatrix> {
    let (d1, d2) = dims;
    if op.nrows() != d1 * d2 || op.ncols() != d1 * d2 {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, expected {}",
            op.nrows(),
            op.ncols(),
            d1 * d2
        )));
    }
    Ok(match keep {
        Keep::First => ComplexMatrix::from_fn(d1, d1, |i, j| {
            (0..d2).map(|k| op[(i * d2 + k, j * d2 + k)]).sum()
        }),
        Keep::Second => ComplexMatrix::from_fn(d2, d2, |i, j| {
            (0..d1).map(|k| op[(k * d2 + i, k * d2 + j)]).sum()
        }),
    })
}

/// Block-diagonal matrix `⊕_x blocks[x]` (all blocks square, same size).
pub fn block_diagonal(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let d = blocks.first().map_or(0, |b| b.nrows());
    let mut out = ComplexMatrix::zeros(d * blocks.len(), d * blocks.len());
    for (x, b) in blocks.iter().enumerate() {
        out.view_mut((x * d, x * d), (d, d)).copy_from(b);
    }
    out
}
