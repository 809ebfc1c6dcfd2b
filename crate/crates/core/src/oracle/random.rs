use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, real, ComplexMatrix, ComplexVector};
use crate::quantum::{DensityMatrix, Measurement};

/// FNV-1a, used to key per-suite RNG streams.
fn fnv1a(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Independent ChaCha20 stream for `(name, seed)`.
pub fn stream(name: &str, seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed ^ fnv1a(name))
}

fn gaussian(rng: &mut impl Rng) -> num_complex::Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of `R`'s
/// diagonal moved into `Q`.
pub fn haar_unitary(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let qr = ginibre(d, d, rng).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..d {
        let phase = r[(k, k)] / r[(k, k)].norm();
        for i in 0..d {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Hilbert–Schmidt random state of rank `rank`.
pub fn random_density(d: usize, rank: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = ginibre(d, rank, rng);
    let m = &g * g.adjoint();
    let tr = crate::linalg::trace(&m).re;
    DensityMatrix::new(m / real(tr)).expect("G G† / tr is a state")
}

/// Random state with a prescribed spectrum in a Haar-random eigenbasis.
pub fn density_with_spectrum(spectrum: &[f64], rng: &mut impl Rng) -> DensityMatrix {
    let d = spectrum.len();
    let u = haar_unitary(d, rng);
    let diag = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(d, spectrum.iter().map(|&p| real(p))));
    DensityMatrix::new(&u * diag * u.adjoint()).expect("unitary conjugate of a spectrum is a state")
}

pub fn random_pure(d: usize, rng: &mut impl Rng) -> DensityMatrix {
    let v = ginibre(d, 1, rng).column(0).into_owned();
    DensityMatrix::pure(&(v.clone() / real(v.norm()))).expect("normalized vector")
}

/// Rank-one PVM onto the columns of a Haar-random unitary.
pub fn random_pvm(d: usize, rng: &mut impl Rng) -> Measurement {
    Measurement::from_basis(&haar_unitary(d, rng)).expect("columns of a unitary form a basis")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_entry_diff};

    #[test]
    fn haar_is_unitary() {
        let mut rng = stream("t", 1);
        for d in 1..6 {
            let u = haar_unitary(d, &mut rng);
            assert!(max_entry_diff(&(&u * u.adjoint()), &identity(d)) < 1e-12);
        }
    }

    #[test]
    fn streams_differ_by_name() {
        let a: u64 = stream("a", 0).random();
        let b: u64 = stream("b", 0).random();
        let a2: u64 = stream("a", 0).random();
        assert_ne!(a, b);
        assert_eq!(a, a2);
    }

    #[test]
    fn prescribed_spectrum() {
        let mut rng = stream("s", 2);
        let rho = density_with_spectrum(&[0.5, 0.3, 0.2], &mut rng);
        for (a, b) in rho.spectrum().iter().zip([0.5, 0.3, 0.2]) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
