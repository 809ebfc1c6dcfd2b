//! ε-secure extraction: leftover-hash bound, rate optimization over α and a Toeplitz extractor.

mod pipeline;
mod rate;
mod toeplitz;

pub use pipeline::{
    bits_per_outcome, encode_outcomes, end_to_end_extract, Extraction, ExtractionMeta,
    HashSeedSource,
};
pub use rate::{
    dupuis_bound, minimize_over_alpha, objective, optimize_alpha, output_length, Bound, RateQuery,
    RateReport,
};
pub use toeplitz::{toeplitz_extract, Bits, HashSeed, SeedProvenance};
