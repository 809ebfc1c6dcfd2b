use serde::Serialize;

use crate::entropy::{cq_up_entropy_closed, RenyiOrder};
use crate::error::{Error, Result};
use crate::extraction::{minimize_over_alpha, output_length, toeplitz_extract, Bits, HashSeed, RateReport};
use crate::quantum::{sample_outcomes, DensityMatrix, Measurement};

/// Stream separation between outcome sampling and a PRNG-derived hash seed.
const HASH_STREAM_TWEAK: u64 = 0x9e37_79b9_7f4a_7c15;

/// Where the Toeplitz seed comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HashSeedSource {
    /// Caller-supplied hex; its first `m + l − 1` bits are used.
    Hex(String),
    /// ChaCha20 stream keyed by the sampling seed.
    Random,
}

/// Sidecar written next to the extracted bits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractionMeta {
    pub n: u64,
    pub epsilon: f64,
    pub alpha_star: f64,
    pub out_bits: u64,
    pub rng_seed: String,
    pub hash_seed_hex: String,
}

#[derive(Debug, Clone)]
pub struct Extraction {
    pub bits: Bits,
    pub raw_bits: usize,
    pub report: RateReport,
    pub seed: HashSeed,
    pub meta: ExtractionMeta,
}

/// Fixed-width MSB-first encoding, `ceil(log₂ N)` bits per outcome.
pub fn encode_outcomes(outcomes: &[u16], n_outcomes: usize) -> Bits {
    let width = bits_per_outcome(n_outcomes);
    let mut bits = Bits::zeros(0);
    for &o in outcomes {
        for b in (0..width).rev() {
            bits.push(o >> b & 1 == 1);
        }
    }
    bits
}

pub fn bits_per_outcome(n_outcomes: usize) -> usize {
    n_outcomes.max(1).next_power_of_two().trailing_zeros() as usize
}

/// Samples `n` outcomes of `meas` on `rho`, then hashes them down to the
/// ε-secure length `output_length(n·H̃↑_{α*}(X|E), ε, α*)`, with `α*`
/// maximizing that length over `(1, 2]`.
pub fn end_to_end_extract(
    rho: &DensityMatrix,
    meas: &Measurement,
    n: u64,
    epsilon: f64,
    rng_seed: u64,
    hash_seed: &HashSeedSource,
) -> Result<Extraction> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::OutOfRange(format!("ε = {epsilon} is outside (0, 1]")));
    }
    let nf = n as f64;
    let h_at = |alpha: f64| -> Result<f64> { cq_up_entropy_closed(rho, meas, RenyiOrder::new(alpha)?) };
    h_at(2.0)?;
    let penalty = |alpha: f64| alpha / (alpha - 1.0) * epsilon.log2();
    let (alpha_star, neg_len) =
        minimize_over_alpha(|a| -(nf * h_at(a).expect("checked above") + penalty(a)));
    let h_up = nf * h_at(alpha_star)?;

    let outcomes = sample_outcomes(rho, meas, n as usize, rng_seed)?;
    let raw = encode_outcomes(&outcomes, meas.len());
    let out_len = (output_length(h_up, epsilon, alpha_star) as usize).min(raw.len());

    let seed_len = (raw.len() + out_len).saturating_sub(1);
    let seed = match hash_seed {
        HashSeedSource::Hex(h) => HashSeed::from_hex(h, seed_len)?,
        HashSeedSource::Random => HashSeed::from_prng(rng_seed ^ HASH_STREAM_TWEAK, seed_len),
    };
    let bits = toeplitz_extract(&raw, &seed, out_len)?;

    let asymptotic = cq_up_entropy_closed(rho, meas, RenyiOrder::One)?;
    let report = RateReport {
        alpha_star,
        rate_bits_per_copy: -neg_len / nf,
        total_bits: out_len as u64,
        asymptotic_rate: asymptotic,
        at_boundary: (alpha_star - 2.0).abs() <= 1e-9,
    };
    let meta = ExtractionMeta {
        n,
        epsilon,
        alpha_star,
        out_bits: out_len as u64,
        rng_seed: format!("{rng_seed:016x}"),
        hash_seed_hex: seed.to_hex(),
    };
    Ok(Extraction { bits, raw_bits: raw.len(), report, seed, meta })
}
