use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, ComplexVector};
use crate::quantum::{DensityMatrix, Measurement, MeasurementKind};

const NORM_TOL: f64 = 1e-12;
const CQ_TRACE_TOL: f64 = 1e-10;

/// Unit vector on `C^{d_A} ⊗ C^{d_E}`, amplitude index `a * d_E + e`.
#[derive(Debug, Clone)]
pub struct PureBipartiteState {
    dims: (usize, usize),
    amplitudes: ComplexVector,
}

impl PureBipartiteState {
    pub fn new(dims: (usize, usize), amplitudes: ComplexVector) -> Result<Self> {
        if amplitudes.len() != dims.0 * dims.1 {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dims {:?}",
                amplitudes.len(),
                dims
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidDistribution(format!("state norm {norm} != 1")));
        }
        Ok(Self { dims, amplitudes })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    /// Amplitudes as a `d_A × d_E` coefficient matrix.
    pub fn coefficients(&self) -> ComplexMatrix {
        let (da, de) = self.dims;
        ComplexMatrix::from_fn(da, de, |a, e| self.amplitudes[a * de + e])
    }

    pub fn projector(&self) -> ComplexMatrix {
        linalg::outer(&self.amplitudes, &self.amplitudes)
    }

    /// Reduced state on the first factor.
    pub fn reduced_first(&self) -> ComplexMatrix {
        let psi = self.coefficients();
        &psi * psi.adjoint()
    }

    /// Reduced state on the second factor.
    pub fn reduced_second(&self) -> ComplexMatrix {
        let psi = self.coefficients();
        psi.transpose() * psi.map(|z| z.conj())
    }

    /// Conditional states `tr_1[(M_x ⊗ I) |ψ⟩⟨ψ|]` for operators on the
    /// first factor.
    fn conditional_second(&self, operators: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
        let psi = self.coefficients();
        let psi_t = psi.transpose();
        let psi_conj = psi.map(|z| z.conj());
        operators
            .iter()
            .map(|m| &psi_t * m.transpose() * &psi_conj)
            .collect()
    }
}

/// `|ρ⟩ = (√ρ ⊗ I) Σ_k |k⟩|k⟩`, the purification with `d_E = d_A`.
pub fn canonical_purification(rho: &DensityMatrix) -> PureBipartiteState {
    let d = rho.dim();
    let root = rho.power(0.5);
    let amplitudes = ComplexVector::from_fn(d * d, |idx, _| root[(idx / d, idx % d)]);
    let norm = amplitudes.norm();
    PureBipartiteState {
        dims: (d, d),
        amplitudes: amplitudes.unscale(norm),
    }
}

/// A classical-quantum state `Σ_x |x⟩⟨x| ⊗ ρ_{E,x}`.
#[derive(Debug, Clone)]
pub struct CqState {
    dim_e: usize,
    blocks: Vec<ComplexMatrix>,
}

impl CqState {
    /// Validates PSD blocks with total trace one.
    pub fn new(blocks: Vec<ComplexMatrix>) -> Result<Self> {
        let dim_e = blocks
            .first()
            .map(|b| b.nrows())
            .ok_or_else(|| Error::InvalidDistribution("empty cq state".into()))?;
        let mut total = 0.0;
        for b in &blocks {
            if b.nrows() != dim_e || b.ncols() != dim_e {
                return Err(Error::DimensionMismatch("cq blocks differ in size".into()));
            }
            let min = linalg::eigh(b).values.last().copied().unwrap_or(0.0);
            if min < -1e-9 {
                return Err(Error::NotPsd { eigenvalue: min });
            }
            total += linalg::trace(b).re;
        }
        if (total - 1.0).abs() > CQ_TRACE_TOL {
            return Err(Error::TraceNotOne { trace: total });
        }
        Ok(Self { dim_e, blocks })
    }

    pub(crate) fn from_blocks_unchecked(blocks: Vec<ComplexMatrix>) -> Self {
        let dim_e = blocks.first().map_or(0, |b| b.nrows());
        Self { dim_e, blocks }
    }

    pub fn dim_e(&self) -> usize {
        self.dim_e
    }

    pub fn outcomes(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    /// `p(x) = tr ρ_{E,x}`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.blocks.iter().map(|b| linalg::trace(b).re.max(0.0)).collect()
    }

    /// `ρ_E = Σ_x ρ_{E,x}`.
    pub fn marginal_e(&self) -> ComplexMatrix {
        self.blocks
            .iter()
            .fold(ComplexMatrix::zeros(self.dim_e, self.dim_e), |acc, b| acc + b)
    }

    /// The full block-diagonal matrix on `X ⊗ E`.
    pub fn to_matrix(&self) -> ComplexMatrix {
        linalg::block_diagonal(&self.blocks)
    }

    /// Merges outcomes: `groups[x]` lists the fine outcomes forming coarse outcome `x`.
    pub fn coarse_grain(&self, groups: &[Vec<usize>]) -> Result<Self> {
        let mut blocks = Vec::with_capacity(groups.len());
        for g in groups {
            let mut acc = ComplexMatrix::zeros(self.dim_e, self.dim_e);
            for &i in g {
                let b = self.blocks.get(i).ok_or_else(|| {
                    Error::DimensionMismatch(format!("outcome {i} out of range"))
                })?;
                acc += b;
            }
            blocks.push(acc);
        }
        Ok(Self { dim_e: self.dim_e, blocks })
    }
}

/// Post-measurement cq state against an adversary holding the canonical
/// purification: `ρ_{E,x} = tr_A[(M_x ⊗ I_E)|ρ⟩⟨ρ|]`.
pub fn post_measurement_cq(rho: &DensityMatrix, meas: &Measurement) -> Result<CqState> {
    if meas.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "measurement on dimension {}, state on {}",
            meas.dim(),
            rho.dim()
        )));
    }
    let purification = canonical_purification(rho);
    Ok(CqState::from_blocks_unchecked(
        purification.conditional_second(meas.elements()),
    ))
}

/// Pure state on `A ⊗ B ⊗ E`, amplitude index `(a * d_B + b) * d_E + e`.
#[derive(Debug, Clone)]
pub struct TripartiteState {
    dims: (usize, usize, usize),
    amplitudes: ComplexVector,
}

impl TripartiteState {
    pub fn new(dims: (usize, usize, usize), amplitudes: ComplexVector) -> Result<Self> {
        let (da, db, de) = dims;
        PureBipartiteState::new((da * db, de), amplitudes.clone())?;
        Ok(Self { dims, amplitudes })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    /// `|ρ⟩_{A E_A} ⊗ |ψ⟩_{B E_B}` regrouped as `A ⊗ B ⊗ (E_A ⊗ E_B)`.
    pub fn from_product(source: &PureBipartiteState, probe: &PureBipartiteState) -> Self {
        let (da, ea) = source.dims();
        let (db, eb) = probe.dims();
        let de = ea * eb;
        let s = source.amplitudes();
        let p = probe.amplitudes();
        let amplitudes = ComplexVector::from_fn(da * db * de, |idx, _| {
            let e = idx % de;
            let ab = idx / de;
            let (a, b) = (ab / db, ab % db);
            let (e1, e2) = (e / eb, e % eb);
            s[a * ea + e1] * p[b * eb + e2]
        });
        Self { dims: (da, db, de), amplitudes }
    }

    /// `|ρ⟩_{AE} ⊗ |φ⟩_B` regrouped as `A ⊗ B ⊗ E` (uncorrelated pure probe).
    pub fn with_pure_probe(source: &PureBipartiteState, probe: &ComplexVector) -> Result<Self> {
        let p = PureBipartiteState::new((probe.len(), 1), probe.clone())?;
        Ok(Self::from_product(source, &p))
    }

    fn as_bipartite(&self) -> PureBipartiteState {
        let (da, db, de) = self.dims;
        PureBipartiteState { dims: (da * db, de), amplitudes: self.amplitudes.clone() }
    }

    /// Reduced state on `A ⊗ B`.
    pub fn reduced_ab(&self) -> ComplexMatrix {
        self.as_bipartite().reduced_first()
    }
}

/// `ρ_{XE} = Σ_x |x⟩⟨x| ⊗ tr_{AB}[(P_x ⊗ I_E) ρ_{ABE}]` for a projective
/// measurement on `A ⊗ B`.
pub fn dilated_post_measurement(state: &TripartiteState, pvm: &Measurement) -> Result<CqState> {
    let (da, db, _) = state.dims();
    if pvm.dim() != da * db {
        return Err(Error::DimensionMismatch(format!(
            "measurement on dimension {}, A⊗B has dimension {}",
            pvm.dim(),
            da * db
        )));
    }
    if pvm.kind() != MeasurementKind::Pvm {
        return Err(Error::NotProjective);
    }
    Ok(CqState::from_blocks_unchecked(
        state.as_bipartite().conditional_second(pvm.elements()),
    ))
}
