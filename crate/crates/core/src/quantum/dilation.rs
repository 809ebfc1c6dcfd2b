//! Naimark dilations: projective measurements on `A ⊗ B` with a probe state
//! on `B` that reproduce a POVM on `A`.

use crate::error::{Error, Result};
use crate::linalg::{self, max_entry_diff, partial_trace, ComplexMatrix, ComplexVector, Keep};
use crate::quantum::{DensityMatrix, Measurement, MeasurementKind, PureBipartiteState};

const DISTRIBUTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct DilationSpec {
    dim_a: usize,
    probe: DensityMatrix,
    projectors: Measurement,
}

impl DilationSpec {
    pub fn new(dim_a: usize, probe: DensityMatrix, projectors: Measurement) -> Result<Self> {
        if projectors.kind() != MeasurementKind::Pvm {
            return Err(Error::NotProjective);
        }
        if projectors.dim() != dim_a * probe.dim() {
            return Err(Error::DimensionMismatch(format!(
                "projectors on dimension {}, expected {}",
                projectors.dim(),
                dim_a * probe.dim()
            )));
        }
        Ok(Self { dim_a, probe, projectors })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.probe.dim()
    }

    pub fn probe(&self) -> &DensityMatrix {
        &self.probe
    }

    pub fn projectors(&self) -> &Measurement {
        &self.projectors
    }

    /// The POVM `tr_B[P_x (I_A ⊗ ρ_B)]` this dilation implements.
    pub fn implemented_povm(&self) -> Vec<ComplexMatrix> {
        let lift = linalg::kron(&linalg::identity(self.dim_a), self.probe.matrix());
        self.projectors
            .elements()
            .iter()
            .map(|p| {
                partial_trace(&(p * &lift), (self.dim_a, self.dim_b()), Keep::First)
                    .expect("dimensions checked at construction")
            })
            .collect()
    }

    /// Largest entry deviation of the consistency condition against `target`.
    pub fn consistency_residual(&self, target: &Measurement) -> Result<f64> {
        if target.len() != self.projectors.len() || target.dim() != self.dim_a {
            return Err(Error::DimensionMismatch(
                "target POVM does not match the dilation".into(),
            ));
        }
        Ok(self
            .implemented_povm()
            .iter()
            .zip(target.elements())
            .map(|(got, want)| max_entry_diff(got, want))
            .fold(0.0, f64::max))
    }
}

fn check_distribution(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty distribution".into()));
    }
    if p.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidDistribution("negative or non-finite entry".into()));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > DISTRIBUTION_TOL {
        return Err(Error::InvalidDistribution(format!("sums to {total}")));
    }
    Ok(())
}

/// Dilation of the trivial POVM `M_x = p(x) I_d`: `P_x = I_A ⊗ |x⟩⟨x|`,
/// `ρ_B = Σ p(x)|x⟩⟨x|`, together with the purification
/// `|ψ⟩_{BE} = Σ √p(x) |x⟩|x⟩` of the probe.
pub fn trivial_povm_dilation(d: usize, p: &[f64]) -> Result<(DilationSpec, PureBipartiteState)> {
    check_distribution(p)?;
    let n = p.len();
    let probe = DensityMatrix::diagonal(p)?;
    let projectors = (0..n)
        .map(|x| {
            let mut e = ComplexMatrix::zeros(n, n);
            e[(x, x)] = linalg::real(1.0);
            linalg::kron(&linalg::identity(d), &e)
        })
        .collect();
    let projectors = Measurement::new(projectors, MeasurementKind::Pvm)?;
    let amplitudes = ComplexVector::from_fn(n * n, |idx, _| {
        let (b, e) = (idx / n, idx % n);
        if b == e {
            linalg::real(p[b].sqrt())
        } else {
            linalg::real(0.0)
        }
    });
    let purification = PureBipartiteState::new((n, n), amplitudes)?;
    Ok((DilationSpec::new(d, probe, projectors)?, purification))
}

/// The POVM `{p(x) I_d}`.
pub fn trivial_povm(d: usize, p: &[f64]) -> Result<Measurement> {
    check_distribution(p)?;
    Measurement::new(
        p.iter().map(|&px| linalg::identity(d).scale(px)).collect(),
        MeasurementKind::Povm,
    )
}

/// Isometry dilation of a rank-one POVM with `N` outcomes into `A ⊗ C^N`
/// with probe `|0⟩⟨0|`: `U(|ψ⟩|0⟩) = |0⟩ ⊗ Σ_x ⟨m_x|ψ⟩|x⟩`, completed to a
/// unitary, and `P_x = U†(I_A ⊗ |x⟩⟨x|)U`.
pub fn naimark_dilation(meas: &Measurement) -> Result<DilationSpec> {
    let vectors = meas.rank_one_vectors()?;
    let d = meas.dim();
    let n = vectors.len();
    let big = d * n;
    // columns fixed by the isometry
    let mut columns: Vec<ComplexVector> = Vec::with_capacity(big);
    let mut fixed_inputs = Vec::with_capacity(d);
    for i in 0..d {
        let mut col = ComplexVector::zeros(big);
        for (x, m) in vectors.iter().enumerate() {
            // |0⟩_A ⊗ |x⟩_B sits at index x
            col[x] = m[i].conj();
        }
        columns.push(col);
        fixed_inputs.push(i * n);
    }
    let fixed = columns.len();
    for k in 0..big {
        if columns.len() == big {
            break;
        }
        let mut v = ComplexVector::zeros(big);
        v[k] = linalg::real(1.0);
        for _ in 0..2 {
            for u in &columns {
                let overlap = u.dotc(&v);
                v -= u * overlap;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            columns.push(v.unscale(norm));
        }
    }
    // inputs not of the form |i⟩|0⟩ receive the completion columns in order
    let mut unitary = ComplexMatrix::zeros(big, big);
    let mut spare = fixed..big;
    for input in 0..big {
        let col = match fixed_inputs.iter().position(|&f| f == input) {
            Some(i) => &columns[i],
            None => &columns[spare.next().expect("completion has full size")],
        };
        unitary.set_column(input, col);
    }
    let projectors = (0..n)
        .map(|x| {
            let mut e = ComplexMatrix::zeros(n, n);
            e[(x, x)] = linalg::real(1.0);
            let lifted = linalg::kron(&linalg::identity(d), &e);
            unitary.adjoint() * lifted * &unitary
        })
        .collect();
    let projectors = Measurement::new(projectors, MeasurementKind::Pvm)?;
    let mut probe = vec![0.0; n];
    probe[0] = 1.0;
    DilationSpec::new(d, DensityMatrix::diagonal(&probe)?, projectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{canonical_purification, dilated_post_measurement, TripartiteState};

    #[test]
    fn trivial_dilation_is_consistent() {
        let (spec, _) = trivial_povm_dilation(2, &[0.5, 0.5]).unwrap();
        let target = trivial_povm(2, &[0.5, 0.5]).unwrap();
        assert!(spec.consistency_residual(&target).unwrap() < 1e-15);
    }

    #[test]
    fn trivial_dilation_with_deterministic_probe() {
        let (spec, psi) = trivial_povm_dilation(2, &[1.0, 0.0]).unwrap();
        let target = trivial_povm(2, &[1.0, 0.0]).unwrap();
        assert!(spec.consistency_residual(&target).unwrap() < 1e-15);
        let rho = DensityMatrix::maximally_mixed(2);
        let state = TripartiteState::from_product(&canonical_purification(&rho), &psi);
        let cq = dilated_post_measurement(&state, spec.projectors()).unwrap();
        let p = cq.probabilities();
        assert!((p[0] - 1.0).abs() < 1e-15 && p[1].abs() < 1e-15);
    }

    #[test]
    fn trivial_dilation_rejects_bad_distribution() {
        assert!(matches!(
            trivial_povm_dilation(2, &[0.5, 0.6]),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(trivial_povm_dilation(2, &[1.5, -0.5]).is_err());
    }

    #[test]
    fn naimark_dilation_reproduces_qubit_trine() {
        let r = (1.0_f64 / 3.0).sqrt();
        let vectors: Vec<ComplexVector> = (0..3)
            .map(|k| {
                let phase = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                ComplexVector::from_vec(vec![
                    linalg::real(r * (phase / 2.0).cos()) * 2f64.sqrt(),
                    linalg::real(r * (phase / 2.0).sin()) * 2f64.sqrt(),
                ])
            })
            .collect();
        let trine = Measurement::from_vectors(&vectors, MeasurementKind::Povm).unwrap();
        let spec = naimark_dilation(&trine).unwrap();
        assert!(spec.consistency_residual(&trine).unwrap() < 1e-12);
    }
}
