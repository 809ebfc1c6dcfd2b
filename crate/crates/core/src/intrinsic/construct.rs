use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, real, ComplexMatrix, ComplexVector};
use crate::quantum::{DensityMatrix, Measurement, MeasurementKind};

/// Vectors `|f_y⟩ = d^{-1/2} Σ_k ω^{ky} |v_k⟩` of the Fourier transform of a basis.
pub fn fourier_vectors(basis: &[ComplexVector]) -> Vec<ComplexVector> {
    let d = basis.len();
    let norm = 1.0 / (d as f64).sqrt();
    (0..d)
        .map(|y| {
            let mut f = ComplexVector::zeros(basis[0].len());
            for (k, v) in basis.iter().enumerate() {
                let phase = 2.0 * PI * ((k * y) % d) as f64 / d as f64;
                f += v * (Complex64::from_polar(norm, phase));
            }
            f
        })
        .collect()
}

fn eigenbasis(rho: &DensityMatrix) -> Vec<ComplexVector> {
    (0..rho.dim()).map(|k| rho.eigenvector(k)).collect()
}

/// Rank-one PVM in a basis unbiased to the eigenbasis of `rho`.
pub fn mub_pvm(rho: &DensityMatrix) -> Measurement {
    Measurement::from_vectors(&fourier_vectors(&eigenbasis(rho)), MeasurementKind::Pvm)
        .expect("Fourier transform of an orthonormal basis is a PVM")
}

/// `d²`-outcome rank-one POVM `M_{dx+y} = (1/d)|f_y⟩⟨f_y|`: `d` scaled copies of [`mub_pvm`].
pub fn uniform_povm(rho: &DensityMatrix) -> Measurement {
    let d = rho.dim();
    let scale = real(1.0 / (d as f64).sqrt());
    let f = fourier_vectors(&eigenbasis(rho));
    let vectors: Vec<ComplexVector> = (0..d * d).map(|i| &f[i % d] * scale).collect();
    Measurement::from_vectors(&vectors, MeasurementKind::Povm)
        .expect("copies of a PVM scaled by 1/d form a POVM")
}

/// The four-outcome qubit POVM with `|ψ_0⟩ = (2√t)^{-1}|0⟩` and
/// `|ψ_k⟩ = √((4t−1)/(12t))|0⟩ + 3^{-1/2} e^{2πik/3}|1⟩`, written in the
/// eigenbasis of a state with largest eigenvalue `lambda_max`.
pub fn qubit_optimal_povm(lambda_max: f64, t: f64) -> Result<Measurement> {
    for (name, v) in [("lambda_max", lambda_max), ("t", t)] {
        if !(0.5..=1.0).contains(&v) {
            return Err(Error::OutOfRange(format!("{name} = {v} is outside [1/2, 1]")));
        }
    }
    let mut vectors = vec![ComplexVector::from_vec(vec![real(0.5 / t.sqrt()), real(0.0)])];
    let a = ((4.0 * t - 1.0) / (12.0 * t)).sqrt();
    let b = (1.0_f64 / 3.0).sqrt();
    for k in 1..=3 {
        let phase = 2.0 * PI * k as f64 / 3.0;
        vectors.push(ComplexVector::from_vec(vec![real(a), Complex64::from_polar(b, phase)]));
    }
    Measurement::from_vectors(&vectors, MeasurementKind::Povm)
}

/// `t = λ^γ / (λ^γ + (1−λ)^γ)`, with `0^γ = 0` (so `γ = 0` counts the support).
pub fn matched_t(lambda_max: f64, gamma: f64) -> f64 {
    let w = |l: f64| if l > linalg::RANK_TOL { l.powf(gamma) } else { 0.0 };
    let w0 = w(lambda_max);
    w0 / (w0 + w(1.0 - lambda_max))
}

/// [`qubit_optimal_povm`] at the matched `t`, rotated into the eigenbasis of `rho`.
pub fn qubit_optimal_for(rho: &DensityMatrix, gamma: f64) -> Result<Measurement> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch(format!("qubit construction on dimension {}", rho.dim())));
    }
    let lambda = rho.spectrum()[0];
    let local = qubit_optimal_povm(lambda, matched_t(lambda, gamma))?;
    rotate(&local, &rho.eigen().vectors)
}

/// Qubit tetrahedral SIC POVM.
pub fn tetrahedral_sic() -> Measurement {
    let s = (1.0_f64 / 3.0).sqrt();
    let t = (2.0_f64 / 3.0).sqrt();
    let mut vectors = vec![ComplexVector::from_vec(vec![real(1.0), real(0.0)])];
    for k in 0..3 {
        let phase = 2.0 * PI * k as f64 / 3.0;
        vectors.push(ComplexVector::from_vec(vec![real(s), Complex64::from_polar(t, phase)]));
    }
    let vectors: Vec<ComplexVector> = vectors.iter().map(|v| v * real(0.5_f64.sqrt())).collect();
    Measurement::from_vectors(&vectors, MeasurementKind::Povm).expect("SIC is complete")
}

/// `{U M_x U†}`.
pub fn rotate(meas: &Measurement, u: &ComplexMatrix) -> Result<Measurement> {
    let elements = meas.elements().iter().map(|m| u * m * u.adjoint()).collect();
    Measurement::new(elements, meas.kind())
}
