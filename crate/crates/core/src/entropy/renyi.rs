use crate::entropy::RenyiOrder;
use crate::error::{Error, Result};
use crate::linalg::{self, eigh, ComplexMatrix, RANK_TOL};

const NORMALIZATION_TOL: f64 = 1e-10;
const SUPPORT_LEAK_TOL: f64 = 1e-9;

/// Rényi entropy in bits of a probability vector (or a state's spectrum).
pub fn renyi_entropy(spectrum: &[f64], order: RenyiOrder) -> Result<f64> {
    let total: f64 = spectrum.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL || spectrum.iter().any(|&p| p < -NORMALIZATION_TOL) {
        return Err(Error::InvalidDistribution(format!(
            "spectrum sums to {total} or has negative entries"
        )));
    }
    let positive = spectrum.iter().copied().filter(|&p| p > 0.0);
    Ok(match order {
        RenyiOrder::Zero => (spectrum.iter().filter(|&&p| p > RANK_TOL).count() as f64).log2(),
        RenyiOrder::One => -positive.map(|p| p * p.log2()).sum::<f64>(),
        RenyiOrder::Infinity => -spectrum.iter().fold(0.0_f64, |m, &p| m.max(p)).log2(),
        RenyiOrder::Finite(a) => {
            if a <= 0.0 {
                return Err(Error::InvalidOrder(format!("{a} must be positive")));
            }
            let t = a - 1.0;
            let q: Vec<f64> = positive.map(|p| p / total).collect();
            let ln_sum = if t.abs() < 0.5 {
                // ln Σ p^a = ln(1 + Σ p (p^{a−1} − 1)), accurate as a → 1.
                q.iter().map(|&p| p * (t * p.ln()).exp_m1()).sum::<f64>().ln_1p()
            } else {
                let max = q.iter().fold(0.0_f64, |m, &p| m.max(p));
                a * max.ln() + q.iter().map(|&p| (a * (p / max).ln()).exp()).sum::<f64>().ln()
            };
            ln_sum / (-t * std::f64::consts::LN_2)
        }
    })
}

/// Sandwiched Rényi divergence `D̃_α(ρ‖σ)` in bits for PSD `ρ ≠ 0` and `σ`.
///
/// Both arguments are compressed to the support of `σ`; more than `1e-9` of
/// `ρ`'s weight outside that support is a [`Error::SupportViolation`].
pub fn sandwiched_divergence(
    rho: &ComplexMatrix,
    sigma: &ComplexMatrix,
    alpha: RenyiOrder,
) -> Result<f64> {
    let a = alpha.sandwiched()?;
    if rho.shape() != sigma.shape() || rho.nrows() != rho.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{:?} vs {:?}",
            rho.shape(),
            sigma.shape()
        )));
    }
    let tr_rho = linalg::trace(rho).re;
    if !(tr_rho > 0.0) {
        return Err(Error::InvalidDistribution("first argument has zero trace".into()));
    }
    let sig = eigh(sigma);
    let support = sig.support_projector();
    let weight = tr_rho - linalg::trace_product_re(&support, rho);
    if weight > SUPPORT_LEAK_TOL {
        return Err(Error::SupportViolation { weight });
    }
    let s = sig.power((1.0 - a) / (2.0 * a));
    let sandwiched = &s * rho * &s;
    let inner = eigh(&sandwiched);
    let thr = inner.support_threshold();
    let q: f64 = inner.values.iter().filter(|&&m| m > thr).map(|m| m.powf(a)).sum();
    Ok((q / tr_rho).log2() / (a - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::DensityMatrix;

    fn order(a: f64) -> RenyiOrder {
        RenyiOrder::new(a).unwrap()
    }

    #[test]
    fn uniform_distribution_has_log_d() {
        let p = vec![0.25; 4];
        for a in [0.0, 0.5, 1.0, 2.0, 7.0, f64::INFINITY] {
            assert!((renyi_entropy(&p, order(a)).unwrap() - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn pure_distribution_has_zero() {
        let p = [1.0, 0.0, 0.0];
        for a in [0.0, 0.5, 1.0, 2.0, f64::INFINITY] {
            assert!(renyi_entropy(&p, order(a)).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn collision_entropy() {
        let h = renyi_entropy(&[0.75, 0.25], order(2.0)).unwrap();
        assert!((h + (0.625f64).log2()).abs() < 1e-14);
        assert!((h - 0.678072).abs() < 1e-6);
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(renyi_entropy(&[0.5, 0.4], order(2.0)).is_err());
    }

    #[test]
    fn divergence_of_state_with_itself() {
        let rho = DensityMatrix::diagonal(&[0.5, 0.3, 0.2]).unwrap();
        for a in [0.5, 0.8, 1.5, 3.0] {
            let d = sandwiched_divergence(rho.matrix(), rho.matrix(), order(a)).unwrap();
            assert!(d.abs() < 1e-13);
        }
    }

    #[test]
    fn commuting_divergence_is_classical() {
        let p = [0.75, 0.25];
        let q = [0.5, 0.5];
        let rho = DensityMatrix::diagonal(&p).unwrap();
        let sigma = DensityMatrix::diagonal(&q).unwrap();
        let d = sandwiched_divergence(rho.matrix(), sigma.matrix(), order(2.0)).unwrap();
        let classical: f64 = p.iter().zip(q).map(|(a, b)| a * a / b).sum::<f64>().log2();
        assert!((d - classical).abs() < 1e-14);
        assert!((d - 1.25f64.log2()).abs() < 1e-14);
    }

    #[test]
    fn support_violation() {
        let rho = DensityMatrix::maximally_mixed(2);
        let sigma = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let err = sandwiched_divergence(rho.matrix(), sigma.matrix(), order(2.0)).unwrap_err();
        assert!(matches!(err, Error::SupportViolation { .. }));
    }

    #[test]
    fn order_domain() {
        let rho = DensityMatrix::maximally_mixed(2);
        for bad in [RenyiOrder::One, RenyiOrder::Infinity, RenyiOrder::Finite(0.3)] {
            assert!(matches!(
                sandwiched_divergence(rho.matrix(), rho.matrix(), bad),
                Err(Error::InvalidOrder(_))
            ));
        }
    }
}
