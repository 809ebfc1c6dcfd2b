//! Maximal extractable randomness of finite-dimensional quantum states.
//!
//! The crate computes, for a density matrix `ρ_A`, how much ε-secure randomness
//! projective or general measurements can produce against an adversary holding
//! a purification, builds measurements that reach (or approach) that value,
//! runs a Toeplitz-hash extractor, and cross-checks every closed form against
//! direct matrix evaluation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
pub mod entropy;
pub mod extraction;
pub mod intrinsic;
pub mod linalg;
pub mod oracle;
pub mod quantum;

pub use entropy::{EntropyFamily, RenyiOrder};
pub use error::{Error, Result};
pub use quantum::{CqState, DensityMatrix, Measurement, MeasurementKind};
