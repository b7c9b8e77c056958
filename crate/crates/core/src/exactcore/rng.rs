use num_bigint::BigInt;

use super::Rational;

/// Multiplier from Steele & Vigna, "Computationally easy, spectrally good
/// multipliers for congruential pseudorandom number generators" (2021),
/// for a multiplicative generator modulo 2^64.
pub const MCG64_MULTIPLIER: u64 = 0xf135_7aea_2e62_a9c5;

/// 64-bit multiplicative congruential generator.
///
/// The state is `2 * seed + 1` (the state must stay odd), it advances as
/// `state <- state * MCG64_MULTIPLIER mod 2^64`, and each draw returns the
/// upper 32 bits of the new state. The sequence for a given seed is fixed
/// forever; test fixtures depend on it.
#[derive(Debug, Clone)]
pub struct Mcg64 {
    state: u64,
}

impl Mcg64 {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed.wrapping_shl(1) | 1,
        }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self.state.wrapping_mul(MCG64_MULTIPLIER);
        (self.state >> 32) as u32
    }

    /// Uniform-ish integer in `0..bound` by multiply-shift. `bound` must be
    /// positive and at most 2^32.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0 && bound <= 1 << 32, "bound out of range");
        (u64::from(self.next_u32()) * bound) >> 32
    }

    /// Integer in `lo..=hi`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    /// Rational `p/q` with `|p| <= max_num` and `1 <= q <= max_den`.
    pub fn rational(&mut self, max_num: i64, max_den: i64) -> Rational {
        let p = self.range_i64(-max_num, max_num);
        let q = self.range_i64(1, max_den);
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn rational_vec(&mut self, len: usize, max_num: i64, max_den: i64) -> Vec<Rational> {
        (0..len).map(|_| self.rational(max_num, max_den)).collect()
    }
}
