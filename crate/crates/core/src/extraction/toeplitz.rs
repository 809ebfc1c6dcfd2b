use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// A bit string packed into `u64` words, bit `i` at position `i % 64` of word `i / 64`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut out = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            out.set(i, b);
        }
        out
    }

    /// Reads `len` bits from bytes, most significant bit of each byte first.
    pub fn from_bytes_msb(bytes: &[u8], len: usize) -> Result<Self> {
        if bytes.len() * 8 < len {
            return Err(Error::SeedLengthMismatch { expected: len, actual: bytes.len() * 8 });
        }
        let mut out = Self::zeros(len);
        for i in 0..len {
            out.set(i, bytes[i / 8] >> (7 - i % 8) & 1 == 1);
        }
        Ok(out)
    }

    /// Packs into bytes, most significant bit first; the last byte is zero-padded.
    pub fn to_bytes_msb(&self) -> Vec<u8> {
        let mut bytes = vec![0u8; self.len.div_ceil(8)];
        for i in 0..self.len {
            if self.get(i) {
                bytes[i / 8] |= 0x80 >> (i % 8);
            }
        }
        bytes
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, bit);
    }

    pub fn xor(&self, other: &Bits) -> Bits {
        assert_eq!(self.len, other.len, "xor of bit strings of different length");
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect();
        Bits { words, len: self.len }
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// 64 bits starting at `offset`; bits past the end read as zero.
    fn word_at(&self, offset: usize) -> u64 {
        let (w, s) = (offset / 64, offset % 64);
        let lo = self.words.get(w).copied().unwrap_or(0);
        if s == 0 {
            return lo;
        }
        let hi = self.words.get(w + 1).copied().unwrap_or(0);
        (lo >> s) | (hi << (64 - s))
    }

    fn reversed(&self) -> Bits {
        let mut out = Bits::zeros(self.len);
        for i in 0..self.len {
            out.set(self.len - 1 - i, self.get(i));
        }
        out
    }
}

/// How a hash seed was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "source")]
pub enum SeedProvenance {
    Caller,
    Prng { seed: u64 },
}

/// The `m + l − 1` bits defining a Toeplitz matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashSeed {
    bits: Bits,
    provenance: SeedProvenance,
}

impl HashSeed {
    pub fn from_bits(bits: Bits) -> Self {
        Self { bits, provenance: SeedProvenance::Caller }
    }

    /// First `len` bits of a hex string, MSB first.
    pub fn from_hex(hex_str: &str, len: usize) -> Result<Self> {
        let trimmed = hex_str.trim().trim_start_matches("0x");
        let bytes = hex::decode(trimmed).map_err(|e| Error::Parse(format!("hash seed: {e}")))?;
        Ok(Self::from_bits(Bits::from_bytes_msb(&bytes, len)?))
    }

    /// `len` bits from a ChaCha20 stream keyed by `seed`.
    pub fn from_prng(seed: u64, len: usize) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut bytes = vec![0u8; len.div_ceil(8)];
        rng.fill_bytes(&mut bytes);
        let bits = Bits::from_bytes_msb(&bytes, len).expect("enough bytes were drawn");
        Self { bits, provenance: SeedProvenance::Prng { seed } }
    }

    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn provenance(&self) -> SeedProvenance {
        self.provenance
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.bits.to_bytes_msb())
    }
}

/// `z_i = ⊕_j T(i, j) x_j` with `T(i, j) = seed[i − j + m − 1]`.
pub fn toeplitz_extract(input: &Bits, seed: &HashSeed, out_len: usize) -> Result<Bits> {
    let m = input.len();
    if out_len > m {
        return Err(Error::OutputTooLong { out_len, input_len: m });
    }
    if out_len == 0 {
        return Ok(Bits::zeros(0));
    }
    let expected = m + out_len - 1;
    if seed.len() != expected {
        return Err(Error::SeedLengthMismatch { expected, actual: seed.len() });
    }
    // With y_k = x_{m−1−k}, row i is the seed window [i, i + m) against y.
    let y = input.reversed();
    let s = seed.bits();
    let mut out = Bits::zeros(out_len);
    for i in 0..out_len {
        let mut acc = 0u64;
        for (w, &yw) in y.words.iter().enumerate() {
            acc ^= s.word_at(i + 64 * w) & yw;
        }
        out.set(i, acc.count_ones() & 1 == 1);
    }
    Ok(out)
}
