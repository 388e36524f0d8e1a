//! Monte Carlo SEP estimation for both receivers.
//!
//! Symbol `i` draws its outer and inner labels from one `u64` of stream
//! `(seed, STREAM_SYMBOLS)` at index `i` (outer = bits 0–1, inner = bits 2–3)
//! and its noise from the Bob/Eve channel streams at index `i`. Work is split
//! into fixed chunks and error counts are summed, so the result is the same
//! for any worker count.

use rayon::prelude::*;

use crate::channel::{ChannelSpec, NoiseDraws};
use crate::constellation::{
    cancel_interference, eve_detect_outer, ml_detect_outer, outer_point, superpose, Pac,
    SymbolLabel,
};
use crate::error::{Error, Result};
use crate::metrics::binomial_half_width;
use crate::rng::{CounterRng, STREAM_SYMBOLS};
use crate::scalar::Scalar;
use crate::sep::{sep_eavesdropper, sep_legitimate, sigma_from_snr};

const CHUNK: u64 = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationParams<T> {
    pub pac: Pac<T>,
    pub snr_leg_db: f64,
    pub snr_eve_db: f64,
    pub symbols: u64,
    pub seed: u64,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverStats {
    pub snr_db: f64,
    pub symbols: u64,
    pub errors: u64,
    pub empirical: f64,
    pub analytic: f64,
    /// 3σ binomial half-width around the analytic value.
    pub half_width: f64,
}

impl ReceiverStats {
    fn new(snr_db: f64, symbols: u64, errors: u64, analytic: f64) -> Self {
        ReceiverStats {
            snr_db,
            symbols,
            errors,
            empirical: errors as f64 / symbols as f64,
            analytic,
            half_width: binomial_half_width(analytic, symbols),
        }
    }

    pub fn within_3sigma(&self) -> bool {
        (self.empirical - self.analytic).abs() <= self.half_width
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationReport {
    pub legitimate: ReceiverStats,
    pub eavesdropper: ReceiverStats,
}

fn run_chunk<T: Scalar>(p: &SimulationParams<T>, start: u64, end: u64) -> Result<(u64, u64)> {
    let a = p.pac;
    let mut labels = CounterRng::at(p.seed, STREAM_SYMBOLS, start, 2);
    let mut bob = NoiseDraws::new(&ChannelSpec::legitimate(p.snr_leg_db, p.seed), start)?;
    let mut eve = NoiseDraws::new(&ChannelSpec::eavesdropper(p.snr_eve_db, p.seed), start)?;
    let (mut err_leg, mut err_eve) = (0u64, 0u64);
    for _ in start..end {
        let word = labels.next_u64();
        let outer = SymbolLabel::from_low_bits(word as u8);
        let inner = SymbolLabel::from_low_bits((word >> 2) as u8);
        let y2 = outer_point::<T>(inner);
        let y = superpose(outer_point(outer), y2, a);

        let (nr, ni) = bob.next_noise();
        let s1 = y + num_complex::Complex::new(T::lit(nr), T::lit(ni));
        if ml_detect_outer(cancel_interference(s1, y2, a)) != outer {
            err_leg += 1;
        }
        let (nr, ni) = eve.next_noise();
        let s2 = y + num_complex::Complex::new(T::lit(nr), T::lit(ni));
        if eve_detect_outer(s2, a) != outer {
            err_eve += 1;
        }
    }
    Ok((err_leg, err_eve))
}

fn count_errors<T: Scalar>(p: &SimulationParams<T>) -> Result<(u64, u64)> {
    let chunks: Vec<(u64, u64)> = (0..p.symbols.div_ceil(CHUNK))
        .map(|k| (k * CHUNK, ((k + 1) * CHUNK).min(p.symbols)))
        .collect();
    let work = || {
        chunks
            .par_iter()
            .map(|&(s, e)| run_chunk(p, s, e))
            .try_reduce(|| (0, 0), |x, y| Ok((x.0 + y.0, x.1 + y.1)))
    };
    if p.workers == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(p.workers)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(work)
    }
}

/// Empirical and analytic SEPs for both receivers.
pub fn simulate_sep<T: Scalar>(p: &SimulationParams<T>) -> Result<SimulationReport> {
    if p.symbols == 0 {
        return Err(Error::InvalidParameter("need at least one symbol".into()));
    }
    let sigma_leg = sigma_from_snr(T::lit(p.snr_leg_db))?;
    let sigma_eve = sigma_from_snr(T::lit(p.snr_eve_db))?;
    let (err_leg, err_eve) = count_errors(p)?;
    Ok(SimulationReport {
        legitimate: ReceiverStats::new(
            p.snr_leg_db,
            p.symbols,
            err_leg,
            sep_legitimate(p.pac, sigma_leg).to_f64_lossy(),
        ),
        eavesdropper: ReceiverStats::new(
            p.snr_eve_db,
            p.symbols,
            err_eve,
            sep_eavesdropper(p.pac, sigma_eve).to_f64_lossy(),
        ),
    })
}
