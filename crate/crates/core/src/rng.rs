//! Deterministic pseudo-randomness for the samplers.
//!
//! Reproducibility across platforms, thread counts, and crate versions is a
//! hard requirement for the stochastic outputs, so instead of pulling in an
//! external generator we pin one small, fully specified algorithm:
//! SplitMix64. Its whole state is one `u64`, each step adds the 64-bit
//! golden-ratio constant and applies a fixed avalanche mix, and it is
//! integer-only, so identical seeds give identical streams everywhere.
//!
//! **Substream rule.** Sample `i` of a run seeded with `s` always draws from
//! `SplitMix64::substream(s, i)`, an independent generator whose initial
//! state is defined below purely in terms of `s` and `i`. Workers can
//! therefore process samples in any order, or be split across any number of
//! threads, without changing a single drawn value.

/// SplitMix64 generator (Steele–Lea–Flood mixing constants).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

impl SplitMix64 {
    /// Generator whose first output is `mix(seed + GOLDEN)`.
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    /// Independent generator for substream `index` of master seed `seed`.
    ///
    /// Defined as `SplitMix64::new(t)` where `t` is the first output of
    /// `SplitMix64::new(seed ^ (index + 1) * GOLDEN)`. The `index + 1`
    /// offset keeps substream 0 distinct from the master stream itself.
    pub fn substream(seed: u64, index: u64) -> SplitMix64 {
        let mut g = SplitMix64::new(seed ^ index.wrapping_add(1).wrapping_mul(GOLDEN));
        let t = g.next_u64();
        SplitMix64::new(t)
    }

    /// Next raw 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform double in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Exponential variate with the given rate (mean `1 / rate`).
    ///
    /// Uses inversion of `1 - u` so a zero draw cannot produce `ln(0)`.
    pub fn next_exp(&mut self, rate: f64) -> f64 {
        debug_assert!(rate > 0.0);
        -(1.0 - self.next_f64()).ln() / rate
    }

    /// Uniform index in `0..bound`.
    ///
    /// Plain modulo reduction: for the bounds used here (at most a few
    /// hundred thousand) the bias is below 2^-40 and irrelevant, while the
    /// arithmetic stays trivially portable.
    pub fn next_below(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        (self.next_u64() % bound as u64) as usize
    }
}
