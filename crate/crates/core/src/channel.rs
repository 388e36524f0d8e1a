//! Seeded AWGN for the legitimate and eavesdropping paths.
//!
//! Sample `i` of a sequence receives the Box–Muller pair read from words
//! `4i..4i+4` of the ChaCha20 stream `(seed, stream_id)`. The first `u64`
//! sets the radius, the second the angle; the cosine branch goes to the real
//! part. Noise at index `i` is therefore independent of chunking and worker
//! count.

use num_complex::Complex;

use crate::constellation::ComplexSample;
use crate::error::Result;
use crate::rng::{CounterRng, STREAM_BOB, STREAM_EVE};
use crate::scalar::Scalar;
use crate::sep::sigma_from_snr;

const WORDS_PER_SAMPLE: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub snr_db: f64,
    pub seed: u64,
    pub stream_id: u64,
}

impl ChannelSpec {
    pub fn new(snr_db: f64, seed: u64, stream_id: u64) -> Self {
        ChannelSpec {
            snr_db,
            seed,
            stream_id,
        }
    }

    pub fn legitimate(snr_db: f64, seed: u64) -> Self {
        Self::new(snr_db, seed, STREAM_BOB)
    }

    pub fn eavesdropper(snr_db: f64, seed: u64) -> Self {
        Self::new(snr_db, seed, STREAM_EVE)
    }

    pub fn sigma(&self) -> Result<f64> {
        Ok(sigma_from_snr(self.snr_db)?.value())
    }
}

/// Noise deviates for consecutive sample indices, starting at `first`.
pub struct NoiseDraws {
    rng: CounterRng,
    sigma: f64,
}

impl NoiseDraws {
    pub fn new(spec: &ChannelSpec, first: u64) -> Result<Self> {
        Ok(NoiseDraws {
            rng: CounterRng::at(spec.seed, spec.stream_id, first, WORDS_PER_SAMPLE),
            sigma: spec.sigma()?,
        })
    }

    #[inline]
    pub fn next_noise(&mut self) -> (f64, f64) {
        let (g_re, g_im) = self.rng.normal_pair();
        (self.sigma * g_re, self.sigma * g_im)
    }
}

/// Noise added to sample `index`.
pub fn noise_at(spec: &ChannelSpec, index: u64) -> Result<(f64, f64)> {
    Ok(NoiseDraws::new(spec, index)?.next_noise())
}

/// Adds noise to a chunk whose first element is sample `first` of the
/// overall sequence.
pub fn awgn_from<T: Scalar>(
    seq: &[ComplexSample<T>],
    spec: &ChannelSpec,
    first: u64,
) -> Result<Vec<ComplexSample<T>>> {
    let mut draws = NoiseDraws::new(spec, first)?;
    Ok(seq
        .iter()
        .map(|&y| {
            let (n_re, n_im) = draws.next_noise();
            y + Complex::new(T::lit(n_re), T::lit(n_im))
        })
        .collect())
}

/// `output[i] = input[i] + n_i` with `n_i ~ N(0, σ²)` per real dimension.
pub fn awgn<T: Scalar>(
    seq: &[ComplexSample<T>],
    spec: &ChannelSpec,
) -> Result<Vec<ComplexSample<T>>> {
    awgn_from(seq, spec, 0)
}
