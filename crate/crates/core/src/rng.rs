//! Counter-based random streams.
//!
//! Every deviate is addressed by `(seed, stream, index)`: the ChaCha20 key
//! comes from `seed`, the ChaCha stream from `stream`, and the block position
//! from `index`. A consumer reading sample `i` always sees the same words no
//! matter how the sequence was chunked or which worker produced it.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

/// Legitimate-receiver channel noise.
pub const STREAM_BOB: u64 = 1;
/// Eavesdropper channel noise.
pub const STREAM_EVE: u64 = 2;
/// Random transmit labels in Monte Carlo SEP runs.
pub const STREAM_SYMBOLS: u64 = 3;
/// Gumbel deviates for the modulator sampler.
pub const STREAM_GUMBEL: u64 = 4;
/// Codeword index selection.
pub const STREAM_INDEX: u64 = 5;
/// Corruption of the regenerated jamming sequence.
pub const STREAM_REGEN: u64 = 6;

const INV_2_53: f64 = 1.0 / (1u64 << 53) as f64;

/// A ChaCha20 stream positioned at a sample index.
///
/// `words_per_index` is the number of 32-bit words each index consumes; it
/// must be the same for every reader of a stream.
#[derive(Clone)]
pub struct CounterRng {
    inner: ChaCha20Rng,
}

impl CounterRng {
    pub fn at(seed: u64, stream: u64, index: u64, words_per_index: u32) -> Self {
        let mut inner = ChaCha20Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        inner.set_word_pos(index as u128 * words_per_index as u128);
        CounterRng { inner }
    }

    /// Stream keyed directly by 32 bytes (used for digest-keyed expansion).
    pub fn keyed(key: [u8; 32]) -> Self {
        CounterRng {
            inner: ChaCha20Rng::from_seed(key),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * INV_2_53
    }

    /// Uniform on `(0, 1]`; safe to take a logarithm of.
    #[inline]
    pub fn uniform_open_low(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * INV_2_53
    }

    /// Uniform integer in `0..bound` (rejection on the widening product).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let m = self.next_u64() as u128 * bound as u128;
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    /// Pair of independent standard normal deviates via Box–Muller.
    ///
    /// Consumes two `u64` (four words): the first sets the radius, the second
    /// the angle.
    #[inline]
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform_open_low();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        (r * c, r * s)
    }
}

/// SplitMix64 finaliser.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a parent seed and an ordinal (e.g. frame number).
pub fn derive_seed(parent: u64, ordinal: u64) -> u64 {
    splitmix64(parent ^ splitmix64(ordinal))
}
