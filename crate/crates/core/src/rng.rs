//! SplitMix64, used for every random draw in the crate.
//!
//! The generator is Steele, Lea & Flood's SplitMix64:
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! return z ^ (z >> 31)
//! ```
//!
//! all arithmetic wrapping modulo 2^64. Uniform reals take the top 53 bits:
//! `(z >> 11) * 2^-53`, which lies in `[0, 1)`.
//!
//! Per-element streams are keyed by `(seed, index)`: the stream for element
//! `i` starts from state `mix(seed) ^ mix(i + 1)` where `mix` is the output
//! function above applied to its argument. Results therefore do not depend
//! on iteration order.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Independent stream for element `index` under `seed`.
    pub fn for_index(seed: u64, index: u64) -> Self {
        Self {
            state: mix(seed) ^ mix(index.wrapping_add(1)),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix(self.state)
    }

    /// Uniform in `[0, 1)`.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[lo, hi)`. Uses a multiply-shift reduction.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        assert!(hi > lo, "empty range");
        let span = hi - lo;
        lo + ((self.next_u64() as u128 * span as u128) >> 64) as u64
    }
}

/// Derive a child seed from a parent seed and a salt.
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    SplitMix64::for_index(seed, salt).next_u64()
}
