//! Counter-based deterministic random number generation.
//!
//! Output depends only on `(key, counter)`, so independently keyed streams
//! never share state and identical keys reproduce identical draws on every
//! platform. Not cryptographic.

/// SplitMix64 finalizer. Full 64-bit avalanche of the input word.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Keyed counter-based generator: the n-th output is a hash of
/// `key` and `n`, so streams with distinct keys are independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self {
            key: mix(seed ^ GOLDEN),
            counter: 0,
        }
    }

    /// Derive a stream key from a seed and a sequence of stream identifiers
    /// (e.g. a sample size and a run index).
    pub fn keyed(seed: u64, stream: &[u64]) -> Self {
        let mut key = mix(seed ^ GOLDEN);
        for &word in stream {
            key = mix(key ^ mix(word.wrapping_add(GOLDEN)));
        }
        Self { key, counter: 0 }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let c = self.counter;
        self.counter = self.counter.wrapping_add(1);
        mix(self.key ^ c.wrapping_mul(GOLDEN).wrapping_add(GOLDEN))
    }

    /// Uniform draw in `[0, 1)` with 53 random mantissa bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in `[lo, hi)`.
    #[inline]
    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform draw in `(0, 1)`: rejects the (measure-zero) exact zero so the
    /// result can be used where strict positivity is required.
    pub fn next_positive_f64(&mut self) -> f64 {
        loop {
            let u = self.next_f64();
            if u > 0.0 {
                return u;
            }
        }
    }
}
