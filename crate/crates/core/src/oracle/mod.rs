//! Brute-force verification of the closed forms on explicit matrices.

pub mod random;
mod suites;

pub use suites::{
    brute_divergence_beta, exact_security_distance, petz_counterexample, petz_expected_second,
    petz_expected_unbiased, petz_values, random_pvm_supremum_search, run_suite,
    toeplitz_universality_deviation, verify_convexity_exponential, verify_divergence_closed_form,
    verify_divergence_near_singular, verify_exact_security, verify_pvm_supremum,
    verify_up_entropy_sandwich, VerificationReport, CONVEXITY_TOL, GENERIC_TOL, NEAR_SINGULAR_TOL,
    PETZ_TOL, SECURITY_TOL, SUITE_NAMES, SUPREMUM_TOL,
};
