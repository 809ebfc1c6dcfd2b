use crate::entropy::{renyi_entropy, sandwiched_divergence, EntropyFamily, RenyiOrder};
use crate::error::{Error, Result};
use crate::linalg::{self, eigh, identity, kron, ComplexMatrix};
use crate::quantum::{CqState, DensityMatrix, Measurement};

fn check_rank_one(rho: &DensityMatrix, meas: &Measurement) -> Result<()> {
    if meas.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "measurement on dimension {}, state on {}",
            meas.dim(),
            rho.dim()
        )));
    }
    if let Some(index) = meas.ranks().iter().position(|&r| r > 1) {
        return Err(Error::NotRankOne { index, rank: meas.ranks()[index] });
    }
    Ok(())
}

fn state_power(rho: &DensityMatrix, order: RenyiOrder) -> ComplexMatrix {
    match order {
        RenyiOrder::Zero => rho.eigen().support_projector(),
        RenyiOrder::One => rho.matrix().clone(),
        RenyiOrder::Finite(g) => rho.power(g),
        RenyiOrder::Infinity => unreachable!("source orders are finite"),
    }
}

/// The distribution `p(x) = tr(ρ^γ M_x) / tr(ρ^γ)`.
pub fn tilted_distribution(rho: &DensityMatrix, meas: &Measurement, gamma: RenyiOrder) -> Vec<f64> {
    let pow = state_power(rho, gamma);
    let mut p: Vec<f64> = meas
        .elements()
        .iter()
        .map(|m| linalg::trace_product_re(&pow, m).max(0.0))
        .collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    p
}

/// `D̃_α(ρ_XE ‖ I_X ⊗ ρ_E^β / tr ρ_E^β)` for the cq state induced by a rank-one
/// measurement on a purification of `rho`, evaluated in closed form.
pub fn cq_divergence_beta(
    rho: &DensityMatrix,
    meas: &Measurement,
    alpha: RenyiOrder,
    beta: f64,
) -> Result<f64> {
    let a = alpha.sandwiched()?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::OutOfRange(format!("beta = {beta} must be positive")));
    }
    check_rank_one(rho, meas)?;
    let pow = rho.power(beta * (1.0 - a) / a + 1.0);
    let numerator: f64 = meas
        .elements()
        .iter()
        .map(|m| linalg::trace_product_re(&pow, m).max(0.0).powf(a))
        .sum();
    let denominator = rho.trace_power(beta).powf(1.0 - a);
    Ok((numerator / denominator).log2() / (a - 1.0))
}

fn closed_form(
    rho: &DensityMatrix,
    meas: &Measurement,
    alpha: RenyiOrder,
    family: EntropyFamily,
) -> Result<f64> {
    let gamma = family.source_order(alpha)?;
    check_rank_one(rho, meas)?;
    let p = tilted_distribution(rho, meas, gamma);
    Ok(renyi_entropy(&p, alpha)? - renyi_entropy(rho.spectrum(), gamma)?)
}

/// `H̃↓_α(X|E)` for a rank-one measurement on a purification of `rho`:
/// `H_α(X′) − H_{1/α}(A)`.
pub fn cq_down_entropy_closed(
    rho: &DensityMatrix,
    meas: &Measurement,
    alpha: RenyiOrder,
) -> Result<f64> {
    closed_form(rho, meas, alpha, EntropyFamily::SandwichedDown)
}

/// `H_α(X″) − H_{α/(2α−1)}(A)`: the value of `−D̃_α(ρ_XE ‖ I ⊗ σ_E)` at
/// `σ_E ∝ ρ_E^{α/(2α−1)}`, for a rank-one measurement on a purification of `rho`.
///
/// This is always a lower bound on `H̃↑_α(X|E)` and equals it when `X″` is
/// uniform, which is the case for every optimal measurement. For other
/// measurements the optimum over `σ_E` can be strictly larger; see
/// [`cq_up_entropy_bounds`]. Defined for `α > 1` and the limit tags 1 and ∞.
pub fn cq_up_entropy_closed(
    rho: &DensityMatrix,
    meas: &Measurement,
    alpha: RenyiOrder,
) -> Result<f64> {
    closed_form(rho, meas, alpha, EntropyFamily::SandwichedUp)
}

/// Bracket `[H_α(X″), H_{2−1/α}(X″)] − H_{α/(2α−1)}(A)` around `H̃↑_α(X|E)`.
///
/// The lower end is [`cq_up_entropy_closed`]; the upper end is
/// `H̃↓_{2−1/α}(X|E)`, which dominates `H̃↑_α(X|E)` for every state.
pub fn cq_up_entropy_bounds(
    rho: &DensityMatrix,
    meas: &Measurement,
    alpha: RenyiOrder,
) -> Result<(f64, f64)> {
    let a = match alpha {
        RenyiOrder::Finite(a) if a > 1.0 => a,
        other => return Err(Error::InvalidOrder(format!("bounds need finite α > 1, got {other}"))),
    };
    let lower = cq_up_entropy_closed(rho, meas, alpha)?;
    let upper = cq_down_entropy_closed(rho, meas, RenyiOrder::new(2.0 - 1.0 / a)?)?;
    Ok((lower, upper))
}

/// `D̃_α(ρ_XE ‖ I_X ⊗ σ_E)` on the explicit block-diagonal matrix.
pub fn cq_divergence_numeric(cq: &CqState, sigma: &ComplexMatrix, alpha: RenyiOrder) -> Result<f64> {
    let rho_xe = cq.to_matrix();
    let sigma_xe = kron(&identity(cq.outcomes()), sigma);
    sandwiched_divergence(&rho_xe, &sigma_xe, alpha)
}

/// `H̃↓_α(X|E) = −D̃_α(ρ_XE ‖ I_X ⊗ ρ_E)` by direct matrix evaluation.
pub fn cq_down_entropy_numeric(cq: &CqState, alpha: RenyiOrder) -> Result<f64> {
    Ok(-cq_divergence_numeric(cq, &cq.marginal_e(), alpha)?)
}

/// Petz conditional entropy `(1/(1−α)) log₂ Σ_x tr(ρ_{E,x}^α ρ_E^{1−α})`, `α ∈ (1, 2]`.
pub fn petz_conditional_entropy(cq: &CqState, alpha: RenyiOrder) -> Result<f64> {
    let a = match alpha {
        RenyiOrder::Finite(a) if a > 1.0 && a <= 2.0 => a,
        other => {
            return Err(Error::InvalidOrder(format!("Petz entropy needs α in (1, 2], got {other}")))
        }
    };
    let marginal = eigh(&cq.marginal_e()).power(1.0 - a);
    let total: f64 = cq
        .blocks()
        .iter()
        .map(|block| linalg::trace_product_re(&eigh(block).power(a), &marginal))
        .sum();
    Ok(total.log2() / (1.0 - a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, real, ComplexVector};
    use crate::quantum::{post_measurement_cq, MeasurementKind};

    fn order(a: f64) -> RenyiOrder {
        RenyiOrder::new(a).unwrap()
    }

    fn hadamard() -> Measurement {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = ComplexMatrix::from_row_slice(2, 2, &[real(s), real(s), real(s), real(-s)]);
        Measurement::from_basis(&u).unwrap()
    }

    fn qubit_state() -> DensityMatrix {
        DensityMatrix::new(ComplexMatrix::from_row_slice(
            2,
            2,
            &[real(0.75), c(0.1, 0.2), c(0.1, -0.2), real(0.25)],
        ))
        .unwrap()
    }

    #[test]
    fn maximally_mixed_mub_has_no_randomness() {
        let rho = DensityMatrix::maximally_mixed(2);
        let d = cq_divergence_beta(&rho, &hadamard(), order(2.0), 1.0).unwrap();
        assert!(d.abs() < 1e-14);
    }

    #[test]
    fn pure_state_gives_log_d() {
        let rho = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        for a in [0.6, 2.0, 5.0] {
            let d = cq_divergence_beta(&rho, &hadamard(), order(a), 1.0).unwrap();
            assert!((d + 1.0).abs() < 1e-13);
            assert!((cq_down_entropy_closed(&rho, &hadamard(), order(a)).unwrap() - 1.0).abs() < 1e-13);
        }
        assert!((cq_up_entropy_closed(&rho, &hadamard(), order(3.0)).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn computational_basis_example() {
        let rho = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        let h = cq_down_entropy_closed(&rho, &Measurement::computational(2), order(2.0)).unwrap();
        let s3 = 3f64.sqrt();
        let p0 = s3 / (s3 + 1.0);
        let p1 = 1.0 / (s3 + 1.0);
        let h_half = 2.0 * (0.75f64.sqrt() + 0.5).log2();
        let expected = -(p0 * p0 + p1 * p1).log2() - h_half;
        assert!((h - expected).abs() < 1e-13);
        // the outcome is a copy of the eigenbasis label, which Eve holds
        assert!(h.abs() < 1e-13);
    }

    #[test]
    fn closed_form_matches_numeric() {
        let rho = qubit_state();
        for meas in [hadamard(), Measurement::computational(2)] {
            let cq = post_measurement_cq(&rho, &meas).unwrap();
            for a in [0.5, 0.7, 1.5, 2.0, 4.0] {
                let closed = cq_down_entropy_closed(&rho, &meas, order(a)).unwrap();
                let via_beta = -cq_divergence_beta(&rho, &meas, order(a), 1.0).unwrap();
                let numeric = cq_down_entropy_numeric(&cq, order(a)).unwrap();
                assert!((closed - via_beta).abs() < 1e-12, "{closed} {via_beta}");
                assert!((closed - numeric).abs() < 1e-9, "{closed} {numeric}");
            }
        }
    }

    #[test]
    fn up_entropy_sandwich() {
        let rho = qubit_state();
        let meas = hadamard();
        for a in [1.2, 2.0, 3.5] {
            let beta = a / (2.0 * a - 1.0);
            let closed = cq_up_entropy_closed(&rho, &meas, order(a)).unwrap();
            let lower = -cq_divergence_beta(&rho, &meas, order(a), beta).unwrap();
            let (low, upper) = cq_up_entropy_bounds(&rho, &meas, order(a)).unwrap();
            assert!((closed - lower).abs() < 1e-12);
            assert_eq!(closed, low);
            assert!(upper >= closed - 1e-12);
        }
    }

    #[test]
    fn up_entropy_bracket_closes_for_unbiased_outcomes() {
        let rho = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        for a in [1.2, 2.0, 3.5] {
            let (low, high) = cq_up_entropy_bounds(&rho, &hadamard(), order(a)).unwrap();
            assert!((low - high).abs() < 1e-12);
        }
    }

    // With a biased X″ the conditioning state ρ_E^β is not optimal: a compass
    // search over qubit states σ_E beats it.
    #[test]
    fn up_closed_form_is_not_the_optimum_for_biased_outcomes() {
        let rho = qubit_state();
        let meas = hadamard();
        let a = order(2.0);
        let cq = post_measurement_cq(&rho, &meas).unwrap();
        let closed = cq_up_entropy_closed(&rho, &meas, a).unwrap();
        let (_, upper) = cq_up_entropy_bounds(&rho, &meas, a).unwrap();
        let value = |r: [f64; 3]| {
            if r.iter().map(|x| x * x).sum::<f64>() >= 0.999 {
                return f64::NEG_INFINITY;
            }
            let sigma = ComplexMatrix::from_row_slice(
                2,
                2,
                &[
                    real(0.5 * (1.0 + r[2])),
                    c(0.5 * r[0], -0.5 * r[1]),
                    c(0.5 * r[0], 0.5 * r[1]),
                    real(0.5 * (1.0 - r[2])),
                ],
            );
            -cq_divergence_numeric(&cq, &sigma, a).unwrap()
        };
        let mut r = [0.0; 3];
        let mut best = value(r);
        let mut step = 0.25;
        while step > 1e-6 {
            let mut improved = false;
            for axis in 0..3 {
                for sign in [-1.0, 1.0] {
                    let mut trial = r;
                    trial[axis] += sign * step;
                    let v = value(trial);
                    if v > best {
                        best = v;
                        r = trial;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        assert!(best > closed + 1e-3, "{best} vs {closed}");
        assert!(best <= upper + 1e-12);
    }

    #[test]
    fn up_family_domain() {
        let rho = qubit_state();
        assert!(matches!(
            cq_up_entropy_closed(&rho, &hadamard(), order(0.8)),
            Err(Error::InvalidOrder(_))
        ));
        assert!(cq_up_entropy_closed(&rho, &hadamard(), RenyiOrder::One).is_ok());
    }

    #[test]
    fn rejects_higher_rank() {
        let rho = qubit_state();
        let half = identity(2) * real(0.5);
        let coarse = Measurement::new(vec![half.clone(), half], MeasurementKind::Povm).unwrap();
        assert!(matches!(
            cq_down_entropy_closed(&rho, &coarse, order(2.0)),
            Err(Error::NotRankOne { index: 0, rank: 2 })
        ));
    }

    #[test]
    fn product_cq_state_is_classical() {
        let p = [0.5, 0.3, 0.2];
        let rho_e = DensityMatrix::diagonal(&[0.6, 0.4]).unwrap();
        let blocks = p.iter().map(|&px| rho_e.matrix() * real(px)).collect();
        let cq = CqState::new(blocks).unwrap();
        for a in [0.6, 2.0] {
            let h = cq_down_entropy_numeric(&cq, order(a)).unwrap();
            assert!((h - renyi_entropy(&p, order(a)).unwrap()).abs() < 1e-12);
        }
    }

    fn qutrit_petz(vectors: [[f64; 3]; 3]) -> f64 {
        let rho = DensityMatrix::diagonal(&[0.25, 0.75, 0.0]).unwrap();
        let vs: Vec<ComplexVector> = vectors
            .iter()
            .map(|v| ComplexVector::from_iterator(3, v.iter().map(|&x| real(x))))
            .collect();
        let meas = Measurement::from_vectors(&vs, MeasurementKind::Pvm).unwrap();
        let cq = post_measurement_cq(&rho, &meas).unwrap();
        petz_conditional_entropy(&cq, order(1.5)).unwrap()
    }

    #[test]
    fn petz_qutrit_values() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let second = qutrit_petz([[1.0, 0.0, 0.0], [0.0, s, s], [0.0, s, -s]]);
        let expected = 2.0 * (4.0 * 2f64.sqrt() / (2f64.sqrt() + 3.0)).log2();
        assert!((second - expected).abs() < 1e-12, "{second} vs {expected}");
        assert!((second - 0.716).abs() < 5e-4);
    }

    #[test]
    fn petz_domain_and_correlated_zero() {
        let blocks = vec![
            DensityMatrix::diagonal(&[1.0, 0.0]).unwrap().matrix() * real(0.5),
            DensityMatrix::diagonal(&[0.0, 1.0]).unwrap().matrix() * real(0.5),
        ];
        let cq = CqState::new(blocks).unwrap();
        assert!(petz_conditional_entropy(&cq, order(1.5)).unwrap().abs() < 1e-14);
        assert!(petz_conditional_entropy(&cq, order(2.5)).is_err());
        assert!(petz_conditional_entropy(&cq, order(0.5)).is_err());
    }
}
