use std::io::{self, Read, Write};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::quantum::{DensityMatrix, Measurement};

/// Half the trace norm of `a - b`.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "{:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let diff = a - b;
    let scale = diff.iter().fold(1.0_f64, |m, z| m.max(z.norm()));
    let deviation = linalg::hermitian_deviation(&diff);
    if deviation > 1e-9 * scale {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(0.5 * linalg::eigh(&diff).values.iter().map(|v| v.abs()).sum::<f64>())
}

/// `n` i.i.d. outcomes of `meas` on `rho`, reproducible from `rng_seed`.
pub fn sample_outcomes(
    rho: &DensityMatrix,
    meas: &Measurement,
    n: usize,
    rng_seed: u64,
) -> Result<Vec<u16>> {
    if meas.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "measurement on dimension {}, state on {}",
            meas.dim(),
            rho.dim()
        )));
    }
    if meas.len() > usize::from(u16::MAX) + 1 {
        return Err(Error::Unsupported("more than 65536 outcomes".into()));
    }
    let probs = meas.probabilities(rho.matrix());
    let dist = WeightedIndex::new(&probs)
        .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
    let mut rng = ChaCha20Rng::seed_from_u64(rng_seed);
    Ok((0..n).map(|_| dist.sample(&mut rng) as u16).collect())
}

/// Outcome samples as little-endian `u16` words.
pub fn write_outcomes(mut w: impl Write, outcomes: &[u16]) -> io::Result<()> {
    let mut buf = Vec::with_capacity(outcomes.len() * 2);
    for o in outcomes {
        buf.extend_from_slice(&o.to_le_bytes());
    }
    w.write_all(&buf)
}

pub fn read_outcomes(mut r: impl Read) -> io::Result<Vec<u16>> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    if buf.len() % 2 != 0 {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "odd byte count"));
    }
    Ok(buf.chunks_exact(2).map(|c| u16::from_le_bytes([c[0], c[1]])).collect())
}
