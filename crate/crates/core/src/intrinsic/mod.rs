//! Maximal intrinsic randomness, optimal measurements and extremality.

mod construct;
mod extremal;

use serde::{Serialize, Serializer};

pub use construct::{
    fourier_vectors, matched_t, mub_pvm, qubit_optimal_for, qubit_optimal_povm, rotate,
    tetrahedral_sic, uniform_povm,
};
pub use extremal::{
    extremal_perturbation, extremality_margin, refine_to_rank_one, ExtremalityCertificate,
    PerturbationOutcome, Refinement, EXTREMALITY_TOL,
};

use crate::entropy::{
    cq_down_entropy_closed, cq_up_entropy_closed, renyi_entropy, EntropyFamily, RenyiOrder,
};
use crate::error::{Error, Result};
use crate::linalg;
use crate::quantum::json::MeasurementJson;
use crate::quantum::{DensityMatrix, Measurement, MeasurementKind};

/// Perturbation budget used for the `d > 2` POVM construction.
pub const DEFAULT_DELTA: f64 = 1e-2;

#[derive(Debug, Clone, Serialize)]
pub struct IntrinsicReport {
    pub family: EntropyFamily,
    pub alpha: RenyiOrder,
    pub class: MeasurementKind,
    pub value_bits: f64,
    /// Closed-form value minus the entropy the attached measurement achieves.
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "measurement_json")]
    pub measurement: Option<Measurement>,
}

fn measurement_json<S: Serializer>(m: &Option<Measurement>, s: S) -> Result<S::Ok, S::Error> {
    m.as_ref().map(MeasurementJson::from_measurement).serialize(s)
}

/// Order `γ` of the state entropy that bounds the randomness, as a number.
pub fn source_gamma(family: EntropyFamily, alpha: RenyiOrder) -> Result<RenyiOrder> {
    family.source_order(alpha)
}

/// `H̃_α(X|E)` of a rank-one measurement in the given sandwiched family.
pub fn cq_entropy(
    rho: &DensityMatrix,
    meas: &Measurement,
    family: EntropyFamily,
    alpha: RenyiOrder,
) -> Result<f64> {
    match family {
        EntropyFamily::SandwichedUp => cq_up_entropy_closed(rho, meas, alpha),
        EntropyFamily::SandwichedDown => cq_down_entropy_closed(rho, meas, alpha),
        EntropyFamily::PetzDown => Err(Error::Unsupported(
            "intrinsic randomness is only available for the sandwiched families".into(),
        )),
    }
}

fn pvm_value(rho: &DensityMatrix, family: EntropyFamily, alpha: RenyiOrder) -> Result<f64> {
    let gamma = source_gamma(family, alpha)?;
    let log_d = (rho.dim() as f64).log2();
    Ok((log_d - renyi_entropy(rho.spectrum(), gamma)?).max(0.0))
}

/// Maximal intrinsic randomness over projective measurements,
/// `log₂ d − H_γ(A)`, achieved by [`mub_pvm`].
pub fn max_intrinsic_pvm(
    rho: &DensityMatrix,
    family: EntropyFamily,
    alpha: RenyiOrder,
) -> Result<IntrinsicReport> {
    let value = pvm_value(rho, family, alpha)?;
    let meas = mub_pvm(rho);
    let achieved = cq_entropy(rho, &meas, family, alpha)?;
    Ok(IntrinsicReport {
        family,
        alpha,
        class: MeasurementKind::Pvm,
        value_bits: value,
        residual: value - achieved,
        measurement: Some(meas),
    })
}

/// The POVM construction used for the report: the exact qubit solution for
/// `d = 2`, an extremal perturbation of [`uniform_povm`] otherwise.
pub fn near_optimal_povm(
    rho: &DensityMatrix,
    family: EntropyFamily,
    alpha: RenyiOrder,
    delta: f64,
) -> Result<Measurement> {
    let gamma = source_gamma(family, alpha)?;
    match rho.dim() {
        1 => Ok(Measurement::computational(1)),
        2 => qubit_optimal_for(rho, gamma.value()),
        _ => match extremal_perturbation(&uniform_povm(rho), delta) {
            Ok(out) => Ok(out.measurement),
            Err(Error::BudgetExhausted(out)) => Ok(out.measurement),
            Err(e) => Err(e),
        },
    }
}

/// Maximal intrinsic randomness over general measurements, `2 log₂ d − H_γ(A)`.
pub fn max_intrinsic_povm(
    rho: &DensityMatrix,
    family: EntropyFamily,
    alpha: RenyiOrder,
) -> Result<IntrinsicReport> {
    let value = pvm_value(rho, family, alpha)? + (rho.dim() as f64).log2();
    let meas = near_optimal_povm(rho, family, alpha, DEFAULT_DELTA)?;
    let achieved = cq_entropy(rho, &meas, family, alpha)?;
    Ok(IntrinsicReport {
        family,
        alpha,
        class: MeasurementKind::Povm,
        value_bits: value,
        residual: value - achieved,
        measurement: Some(meas),
    })
}

/// `max_x |tr(ρ^γ M_x)/tr(ρ^γ) − 1/N|`, with `ρ^0` the support projector.
pub fn optimality_residual(rho: &DensityMatrix, meas: &Measurement, gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::OutOfRange(format!("gamma = {gamma} must be finite and non-negative")));
    }
    if meas.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "measurement on dimension {}, state on {}",
            meas.dim(),
            rho.dim()
        )));
    }
    let pow = rho.power(gamma);
    let total = rho.trace_power(gamma);
    let uniform = 1.0 / meas.len() as f64;
    Ok(meas
        .elements()
        .iter()
        .map(|m| (linalg::trace_product_re(&pow, m) / total - uniform).abs())
        .fold(0.0, f64::max))
}
