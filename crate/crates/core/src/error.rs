use thiserror::Error;

use crate::intrinsic::PerturbationOutcome;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max asymmetry {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a measurement: {0}")]
    NotAMeasurement(String),

    #[error("measurement is not projective")]
    NotProjective,

    #[error("measurement element {index} has rank {rank}, expected rank one")]
    NotRankOne { index: usize, rank: usize },

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("support violation: weight {weight:e} of the first argument lies outside the support of the second")]
    SupportViolation { weight: f64 },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{outcomes} outcomes exceed the d^2 = {max} limit for extremal POVMs")]
    TooManyOutcomes { outcomes: usize, max: usize },

    #[error("perturbation budget exhausted before the measurement became extremal (margin {:e})", .0.certificate.margin)]
    BudgetExhausted(Box<PerturbationOutcome>),

    #[error("hash seed has {actual} bits, expected {expected}")]
    SeedLengthMismatch { expected: usize, actual: usize },

    #[error("output length {out_len} exceeds input length {input_len}")]
    OutputTooLong { out_len: usize, input_len: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable identifier for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "not_square",
            Error::NonFinite => "non_finite",
            Error::NotHermitian { .. } => "not_hermitian",
            Error::NotPsd { .. } => "not_psd",
            Error::TraceNotOne { .. } => "trace_not_one",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NotAMeasurement(_) => "not_a_measurement",
            Error::NotProjective => "not_projective",
            Error::NotRankOne { .. } => "not_rank_one",
            Error::InvalidOrder(_) => "invalid_order",
            Error::SupportViolation { .. } => "support_violation",
            Error::InvalidDistribution(_) => "invalid_distribution",
            Error::OutOfRange(_) => "out_of_range",
            Error::Unsupported(_) => "unsupported",
            Error::TooManyOutcomes { .. } => "too_many_outcomes",
            Error::BudgetExhausted(_) => "budget_exhausted",
            Error::SeedLengthMismatch { .. } => "seed_length_mismatch",
            Error::OutputTooLong { .. } => "output_too_long",
            Error::Parse(_) => "parse",
        }
    }
}
