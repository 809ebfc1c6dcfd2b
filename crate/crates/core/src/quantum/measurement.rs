use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, eigh, max_entry_diff, ComplexMatrix, ComplexVector, RANK_TOL};

const COMPLETENESS_TOL: f64 = 1e-9;
const PSD_TOL: f64 = 1e-9;
const ORTHOGONALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasurementKind {
    Pvm,
    Povm,
}

/// An ordered list of PSD operators summing to the identity.
#[derive(Debug, Clone)]
pub struct Measurement {
    dim: usize,
    kind: MeasurementKind,
    elements: Vec<ComplexMatrix>,
    ranks: Vec<usize>,
}

impl Measurement {
    /// Validates completeness, positivity and (for `Pvm`) orthogonality.
    pub fn new(elements: Vec<ComplexMatrix>, kind: MeasurementKind) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::NotAMeasurement("no elements".into()))?;
        let dim = first.nrows();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        let mut ranks = Vec::with_capacity(elements.len());
        for (x, m) in elements.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "element {x} is {}x{}, expected {dim}x{dim}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if !linalg::is_finite(m) {
                return Err(Error::NonFinite);
            }
            let dev = linalg::hermitian_deviation(m);
            if dev > PSD_TOL {
                return Err(Error::NotHermitian { deviation: dev });
            }
            let e = eigh(m);
            let min = e.values.last().copied().unwrap_or(0.0);
            if min < -PSD_TOL {
                return Err(Error::NotPsd { eigenvalue: min });
            }
            ranks.push(e.values.iter().filter(|&&l| l > RANK_TOL).count());
            sum += m;
        }
        let residual = max_entry_diff(&sum, &linalg::identity(dim));
        if residual > COMPLETENESS_TOL {
            return Err(Error::NotAMeasurement(format!(
                "elements sum to identity only within {residual:e}"
            )));
        }
        if kind == MeasurementKind::Pvm {
            for (x, a) in elements.iter().enumerate() {
                for (y, b) in elements.iter().enumerate() {
                    let prod = a * b;
                    let want = if x == y { a.clone() } else { ComplexMatrix::zeros(dim, dim) };
                    if max_entry_diff(&prod, &want) > ORTHOGONALITY_TOL {
                        return Err(Error::NotProjective);
                    }
                }
            }
        }
        Ok(Self { dim, kind, elements, ranks })
    }

    /// Rank-one measurement `{|m_x⟩⟨m_x|}` from unnormalized vectors.
    pub fn from_vectors(vectors: &[ComplexVector], kind: MeasurementKind) -> Result<Self> {
        Self::new(vectors.iter().map(|v| linalg::outer(v, v)).collect(), kind)
    }

    /// Projective measurement onto the columns of a unitary.
    pub fn from_basis(unitary: &ComplexMatrix) -> Result<Self> {
        let vectors: Vec<_> = (0..unitary.ncols()).map(|k| unitary.column(k).into_owned()).collect();
        Self::from_vectors(&vectors, MeasurementKind::Pvm)
    }

    pub fn computational(dim: usize) -> Self {
        Self::from_basis(&linalg::identity(dim)).expect("computational basis is a PVM")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> MeasurementKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn is_rank_one(&self) -> bool {
        self.ranks.iter().all(|&r| r <= 1)
    }

    /// Vectors `|m_x⟩` with `M_x = |m_x⟩⟨m_x|`; zero elements give zero vectors.
    pub fn rank_one_vectors(&self) -> Result<Vec<ComplexVector>> {
        self.elements
            .iter()
            .enumerate()
            .map(|(x, m)| {
                if self.ranks[x] > 1 {
                    return Err(Error::NotRankOne { index: x, rank: self.ranks[x] });
                }
                let e = eigh(m);
                let top = e.values[0].max(0.0);
                Ok(e.vector(0).scale(top.sqrt()))
            })
            .collect()
    }

    /// Outcome probabilities `tr(ρ M_x)`, clipped at zero.
    pub fn probabilities(&self, rho: &ComplexMatrix) -> Vec<f64> {
        self.elements
            .iter()
            .map(|m| linalg::trace_product_re(rho, m).max(0.0))
            .collect()
    }
}
