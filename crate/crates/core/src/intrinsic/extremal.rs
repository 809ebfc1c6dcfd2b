use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, eigh, outer, real, ComplexMatrix, ComplexVector, RANK_TOL};
use crate::quantum::{Measurement, MeasurementKind};

/// Singular values at or below this count as rank deficiency.
pub const EXTREMALITY_TOL: f64 = 1e-9;

const SPAN_RESIDUAL_TOL: f64 = 1e-9;
const MIN_EPSILON: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremalityCertificate {
    pub is_extremal: bool,
    /// Smallest singular value of the element-vectorization matrix (0 if `N > d²`).
    pub margin: f64,
    pub outcomes: usize,
}

/// Result of [`extremal_perturbation`].
#[derive(Debug, Clone)]
pub struct PerturbationOutcome {
    pub measurement: Measurement,
    pub certificate: ExtremalityCertificate,
    /// `max_x ‖M_x − E_x‖_∞` against the input.
    pub max_distance: f64,
    /// Number of rank-increasing replacements performed.
    pub steps: usize,
}

/// A rank-one refinement together with the parent index of every element.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub measurement: Measurement,
    pub lineage: Vec<usize>,
}

impl Refinement {
    /// Outcome groups mapping the refinement back onto its parent.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let parents = self.lineage.iter().max().map_or(0, |&m| m + 1);
        let mut groups = vec![Vec::new(); parents];
        for (i, &p) in self.lineage.iter().enumerate() {
            groups[p].push(i);
        }
        groups
    }

    /// Sums the refined elements back into their parents.
    pub fn coarse_grain(&self) -> Vec<ComplexMatrix> {
        let d = self.measurement.dim();
        self.groups()
            .iter()
            .map(|g| {
                g.iter().fold(ComplexMatrix::zeros(d, d), |acc, &i| acc + &self.measurement.elements()[i])
            })
            .collect()
    }
}

/// Coordinates of a Hermitian matrix in the orthonormal basis
/// `{|i⟩⟨i|} ∪ {(|i⟩⟨j| + |j⟩⟨i|)/√2} ∪ {i(|i⟩⟨j| − |j⟩⟨i|)/√2}`.
fn vectorize(m: &ComplexMatrix) -> DVector<f64> {
    let d = m.nrows();
    let s2 = std::f64::consts::SQRT_2;
    let mut v = Vec::with_capacity(d * d);
    for i in 0..d {
        v.push(m[(i, i)].re);
    }
    for i in 0..d {
        for j in i + 1..d {
            v.push(s2 * m[(i, j)].re);
            v.push(-s2 * m[(i, j)].im);
        }
    }
    DVector::from_vec(v)
}

fn devectorize(v: &DVector<f64>, d: usize) -> ComplexMatrix {
    let s2 = std::f64::consts::SQRT_2;
    let mut m = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = real(v[i]);
    }
    let mut k = d;
    for i in 0..d {
        for j in i + 1..d {
            let z = linalg::c(v[k] / s2, -v[k + 1] / s2);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            k += 2;
        }
    }
    m
}

fn element_matrix(elements: &[ComplexMatrix]) -> DMatrix<f64> {
    let d = elements[0].nrows();
    let mut a = DMatrix::zeros(d * d, elements.len());
    for (x, m) in elements.iter().enumerate() {
        a.set_column(x, &vectorize(m));
    }
    a
}

fn certificate(elements: &[ComplexMatrix]) -> ExtremalityCertificate {
    let d = elements[0].nrows();
    let n = elements.len();
    let margin = if n > d * d {
        0.0
    } else {
        let sv = element_matrix(elements).singular_values();
        sv.iter().fold(f64::INFINITY, |m, &s| m.min(s))
    };
    ExtremalityCertificate { is_extremal: n <= d * d && margin > EXTREMALITY_TOL, margin, outcomes: n }
}

/// Linear independence test for the elements of a rank-one POVM.
pub fn extremality_margin(meas: &Measurement) -> Result<ExtremalityCertificate> {
    if !meas.is_rank_one() {
        return Err(Error::Unsupported(
            "extremality is decided by linear independence only for rank-one POVMs".into(),
        ));
    }
    Ok(certificate(meas.elements()))
}

/// Splits every element into weighted rank-one projectors onto its eigenvectors.
pub fn refine_to_rank_one(meas: &Measurement) -> Refinement {
    if meas.is_rank_one() {
        return Refinement { measurement: meas.clone(), lineage: (0..meas.len()).collect() };
    }
    let mut elements = Vec::new();
    let mut lineage = Vec::new();
    for (x, m) in meas.elements().iter().enumerate() {
        let e = eigh(m);
        for (k, &lambda) in e.values.iter().enumerate() {
            if lambda > RANK_TOL {
                let v = e.vector(k);
                elements.push(outer(&v, &v) * real(lambda));
                lineage.push(x);
            }
        }
    }
    let measurement = Measurement::new(elements, MeasurementKind::Povm)
        .expect("spectral refinement of a POVM is a POVM");
    Refinement { measurement, lineage }
}

fn numerical_rank(elements: &[ComplexMatrix]) -> usize {
    element_matrix(elements).singular_values().iter().filter(|&&s| s > EXTREMALITY_TOL).count()
}

fn max_distance(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max(linalg::hermitian_op_norm(&(x - y))))
}

/// Null-space direction of the current elements and an orthonormal basis of
/// the orthogonal complement of their span.
fn span_geometry(elements: &[ComplexMatrix]) -> (DVector<f64>, Vec<DVector<f64>>, DMatrix<f64>) {
    let a = element_matrix(elements);
    let dd = a.nrows();
    let svd = a.clone().svd(true, true);
    let v_t = svd.v_t.as_ref().expect("requested");
    let (kmin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bk, bs), (k, &s)| if s < bs { (k, s) } else { (bk, bs) });
    let null = v_t.row(kmin).transpose();

    let u = svd.u.as_ref().expect("requested");
    let mut proj = DMatrix::<f64>::identity(dd, dd);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > EXTREMALITY_TOL {
            let col = u.column(k);
            proj -= col * col.transpose();
        }
    }
    let eig = SymmetricEigen::new(proj.clone());
    let complement = (0..dd)
        .filter(|&k| eig.eigenvalues[k] > 0.5)
        .map(|k| eig.eigenvectors.column(k).into_owned())
        .collect();
    (null, complement, proj)
}

/// Unit vectors `|w⟩` whose projectors leave the span, best first.
fn candidates(complement: &[DVector<f64>], proj: &DMatrix<f64>, d: usize) -> Vec<ComplexVector> {
    let mut scored: Vec<(f64, ComplexVector)> = Vec::new();
    for e in complement {
        let h = eigh(&devectorize(e, d));
        for (k, &lambda) in h.values.iter().enumerate() {
            let w = h.vector(k);
            let residual = (proj * vectorize(&outer(&w, &w))).norm();
            if residual > SPAN_RESIDUAL_TOL {
                scored.push((lambda.abs(), w));
            }
        }
    }
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    scored.into_iter().map(|(_, w)| w).collect()
}

fn renormalize(vectors: &[ComplexVector]) -> Option<Vec<ComplexVector>> {
    let d = vectors[0].len();
    let g = vectors.iter().fold(ComplexMatrix::zeros(d, d), |acc, v| acc + outer(v, v));
    let e = eigh(&g);
    if e.values.iter().any(|&l| l <= RANK_TOL) {
        return None;
    }
    let inv_sqrt = e.apply(|l| l.powf(-0.5));
    Some(vectors.iter().map(|v| &inv_sqrt * v).collect())
}

/// Nudges a rank-one POVM into an extremal one, every element moving by at
/// most `delta` in operator norm.
pub fn extremal_perturbation(meas: &Measurement, delta: f64) -> Result<PerturbationOutcome> {
    if !(delta > 0.0) {
        return Err(Error::OutOfRange(format!("delta = {delta} must be positive")));
    }
    let d = meas.dim();
    if meas.len() > d * d {
        return Err(Error::TooManyOutcomes { outcomes: meas.len(), max: d * d });
    }
    let original = meas.elements().to_vec();
    let mut vectors = meas.rank_one_vectors()?;
    let start = certificate(&original);
    if start.is_extremal {
        return Ok(PerturbationOutcome {
            measurement: meas.clone(),
            certificate: start,
            max_distance: 0.0,
            steps: 0,
        });
    }

    let n = meas.len();
    let mut rank = numerical_rank(&original);
    let needed = n - rank;
    let mut elements = original.clone();
    let mut distance = 0.0;
    let mut steps = 0;

    'outer: while rank < n {
        let budget = delta * (steps + 1) as f64 / needed as f64;
        let (null, complement, proj) = span_geometry(&elements);
        let j = null.iamax();
        let m_j = vectors[j].clone();
        for w in candidates(&complement, &proj, d) {
            let mut eps = 0.5;
            while eps > MIN_EPSILON {
                let tau = &m_j * real((1.0 - eps).sqrt()) + &w * real(eps.sqrt() * m_j.norm());
                let mut trial = vectors.clone();
                trial[j] = tau;
                if let Some(trial) = renormalize(&trial) {
                    let trial_elements: Vec<ComplexMatrix> =
                        trial.iter().map(|v| outer(v, v)).collect();
                    let dist = max_distance(&original, &trial_elements);
                    if dist <= budget {
                        let new_rank = numerical_rank(&trial_elements);
                        if new_rank > rank {
                            vectors = trial;
                            elements = trial_elements;
                            rank = new_rank;
                            distance = dist;
                            steps += 1;
                            continue 'outer;
                        }
                    }
                }
                eps *= 0.5;
            }
        }
        break;
    }

    let cert = certificate(&elements);
    let measurement = Measurement::new(elements, MeasurementKind::Povm)?;
    let outcome = PerturbationOutcome { measurement, certificate: cert, max_distance: distance, steps };
    if cert.is_extremal {
        Ok(outcome)
    } else {
        Err(Error::BudgetExhausted(Box::new(outcome)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intrinsic::{tetrahedral_sic, uniform_povm};
    use crate::linalg::{identity, max_entry_diff};
    use crate::quantum::DensityMatrix;

    #[test]
    fn vectorization_is_an_isometry() {
        let m = ComplexMatrix::from_row_slice(
            2,
            2,
            &[real(0.3), linalg::c(0.1, 0.4), linalg::c(0.1, -0.4), real(0.7)],
        );
        let v = vectorize(&m);
        assert!((v.norm_squared() - linalg::trace_product_re(&m, &m)).abs() < 1e-14);
        assert!(max_entry_diff(&devectorize(&v, 2), &m) < 1e-15);
    }

    #[test]
    fn computational_basis_is_extremal() {
        for d in 2..5 {
            let cert = extremality_margin(&Measurement::computational(d)).unwrap();
            assert!(cert.is_extremal);
            assert!(cert.margin > 0.5);
        }
    }

    #[test]
    fn uniform_povm_is_not_extremal() {
        let rho = DensityMatrix::diagonal(&[0.6, 0.4]).unwrap();
        let cert = extremality_margin(&uniform_povm(&rho)).unwrap();
        assert!(!cert.is_extremal);
        assert!(cert.margin <= 1e-9);
    }

    #[test]
    fn sic_is_extremal() {
        let cert = extremality_margin(&tetrahedral_sic()).unwrap();
        assert!(cert.is_extremal, "{cert:?}");
    }

    #[test]
    fn higher_rank_is_unsupported() {
        let half = identity(2) * real(0.5);
        let m = Measurement::new(vec![half.clone(), half], MeasurementKind::Povm).unwrap();
        assert!(matches!(extremality_margin(&m), Err(Error::Unsupported(_))));
    }

    #[test]
    fn refine_trivial_qubit_povm() {
        let half = identity(2) * real(0.5);
        let m = Measurement::new(vec![half.clone(), half], MeasurementKind::Povm).unwrap();
        let r = refine_to_rank_one(&m);
        assert_eq!(r.measurement.len(), 4);
        assert!(r.measurement.is_rank_one());
        for e in r.measurement.elements() {
            assert!((linalg::trace(e).re - 0.5).abs() < 1e-12);
        }
        for (back, orig) in r.coarse_grain().iter().zip(m.elements()) {
            assert!(max_entry_diff(back, orig) < 1e-10);
        }
        assert_eq!(r.groups(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn refine_rank_one_is_identity() {
        let m = Measurement::computational(3);
        let r = refine_to_rank_one(&m);
        for (a, b) in r.measurement.elements().iter().zip(m.elements()) {
            assert_eq!(max_entry_diff(a, b), 0.0);
        }
    }

    #[test]
    fn extremal_input_unchanged() {
        let m = Measurement::computational(3);
        let out = extremal_perturbation(&m, 1e-2).unwrap();
        assert_eq!(out.steps, 0);
        assert_eq!(out.max_distance, 0.0);
    }

    #[test]
    fn perturbs_uniform_povm() {
        for d in 2..=4 {
            let spectrum: Vec<f64> = (0..d).map(|k| (k + 1) as f64).collect();
            let total: f64 = spectrum.iter().sum();
            let rho = DensityMatrix::diagonal(&spectrum.iter().map(|s| s / total).collect::<Vec<_>>())
                .unwrap();
            let out = extremal_perturbation(&uniform_povm(&rho), 1e-2).unwrap();
            assert!(out.certificate.is_extremal, "d={d}: {:?}", out.certificate);
            assert!(out.max_distance <= 1e-2);
            let mut sum = ComplexMatrix::zeros(d, d);
            out.measurement.elements().iter().for_each(|e| sum += e);
            assert!(max_entry_diff(&sum, &identity(d)) < 1e-9);
        }
    }

    #[test]
    fn too_many_outcomes() {
        let rho = DensityMatrix::maximally_mixed(2);
        let u = uniform_povm(&rho);
        let vs: Vec<ComplexVector> = u
            .rank_one_vectors()
            .unwrap()
            .iter()
            .flat_map(|v| [v * real(0.5f64.sqrt()), v * real(0.5f64.sqrt())])
            .collect();
        let m = Measurement::from_vectors(&vs, MeasurementKind::Povm).unwrap();
        assert!(matches!(
            extremal_perturbation(&m, 1e-2),
            Err(Error::TooManyOutcomes { outcomes: 8, max: 4 })
        ));
    }
}
