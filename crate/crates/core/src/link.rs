//! End-to-end Alice → {Bob, Eve} frame transmission.
//!
//! Alice encodes the image into outer labels, picks a codeword from the
//! private codebook and superposes the two sequences. Bob sees the legitimate
//! AWGN path, regenerates the codeword from the shared index, cancels it and
//! runs the quadrant detector. Eve sees an independent AWGN path and runs the
//! 16-point ML detector, keeping the outer bits.

use rayon::prelude::*;

use crate::channel::{awgn, ChannelSpec};
use crate::codebook::{Codebook, CodewordIndex};
use crate::codec::{decode, encode, CodecSpec, Image};
use crate::constellation::{
    cancel_interference, eve_detect_outer, ml_detect_outer, outer_point, superpose, Pac,
    SymbolLabel,
};
use crate::error::{Error, Result};
use crate::metrics::{psnr, symbol_errors, Psnr, PsnrSummary};
use crate::rng::{derive_seed, CounterRng, STREAM_REGEN};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkConfig<T> {
    pub pac: Pac<T>,
    pub snr_leg_db: f64,
    pub snr_eve_db: f64,
    pub master_seed: u64,
    pub index_seed: u64,
    pub codec: CodecSpec,
    /// Probability that Bob regenerates a jamming label wrongly.
    pub regen_flip_prob: f64,
}

impl<T: Scalar> LinkConfig<T> {
    pub fn new(pac: Pac<T>, snr_leg_db: f64, snr_eve_db: f64, master_seed: u64) -> Self {
        LinkConfig {
            pac,
            snr_leg_db,
            snr_eve_db,
            master_seed,
            index_seed: master_seed,
            codec: CodecSpec::RAW,
            regen_flip_prob: 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        for snr in [self.snr_leg_db, self.snr_eve_db] {
            if !snr.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "snr {snr} dB is not finite"
                )));
            }
        }
        if !(0.0..=1.0).contains(&self.regen_flip_prob) {
            return Err(Error::InvalidParameter(format!(
                "regeneration flip probability {} outside [0, 1]",
                self.regen_flip_prob
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkReport {
    pub index: CodewordIndex,
    pub symbol_count: usize,
    pub errors_leg: usize,
    pub errors_eve: usize,
    pub sep_emp_leg: f64,
    pub sep_emp_eve: f64,
    pub psnr_bob: Psnr,
    pub psnr_eve: Psnr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameOutput {
    pub bob: Image,
    pub eve: Image,
    pub report: LinkReport,
}

/// Bob's copy of the jamming labels, each replaced by one of the other three
/// labels with probability `p`.
fn regenerate(labels: &[SymbolLabel], p: f64, seed: u64) -> Vec<SymbolLabel> {
    if p == 0.0 {
        return labels.to_vec();
    }
    let mut rng = CounterRng::at(seed, STREAM_REGEN, 0, 4);
    labels
        .iter()
        .map(|&l| {
            let hit = rng.uniform() < p;
            let shift = rng.below(3) as u8 + 1;
            if hit {
                SymbolLabel::from_low_bits(l.bits() ^ shift)
            } else {
                l
            }
        })
        .collect()
}

/// Sends one image as frame 0 of `cfg`.
pub fn transmit_frame<T: Scalar>(
    img: &Image,
    codebook: &Codebook<T>,
    cfg: &LinkConfig<T>,
) -> Result<FrameOutput> {
    transmit_frame_numbered(img, codebook, cfg, 0)
}

/// Sends one image; channel and index seeds are derived from the config
/// seeds and `frame`.
pub fn transmit_frame_numbered<T: Scalar>(
    img: &Image,
    codebook: &Codebook<T>,
    cfg: &LinkConfig<T>,
    frame: u64,
) -> Result<FrameOutput> {
    cfg.validate()?;
    let a = cfg.pac;
    let y1 = encode::<T>(img, &cfg.codec)?;
    if y1.len() != codebook.sequence_len() {
        return Err(Error::LengthMismatch {
            expected: codebook.sequence_len(),
            actual: y1.len(),
        });
    }
    let channel_seed = derive_seed(cfg.master_seed, frame);
    let index = codebook.pick_index(derive_seed(cfg.index_seed, frame));
    let y2 = codebook.lookup(index);

    let tx: Vec<_> = y1
        .points()
        .iter()
        .zip(y2.points())
        .map(|(&p1, &p2)| superpose(p1, p2, a))
        .collect();

    let s1 = awgn(&tx, &ChannelSpec::legitimate(cfg.snr_leg_db, channel_seed))?;
    let y2_hat = regenerate(y2.labels(), cfg.regen_flip_prob, channel_seed);
    let bob_labels: Vec<_> = s1
        .iter()
        .zip(&y2_hat)
        .map(|(&s, &l)| ml_detect_outer(cancel_interference(s, outer_point(l), a)))
        .collect();

    let s2 = awgn(
        &tx,
        &ChannelSpec::eavesdropper(cfg.snr_eve_db, channel_seed),
    )?;
    let eve_labels: Vec<_> = s2.iter().map(|&s| eve_detect_outer(s, a)).collect();

    let shape = img.shape();
    let bob = decode(&bob_labels, shape, &cfg.codec)?;
    let eve = decode(&eve_labels, shape, &cfg.codec)?;

    let errors_leg = symbol_errors(y1.labels(), &bob_labels)?;
    let errors_eve = symbol_errors(y1.labels(), &eve_labels)?;
    let n = y1.len();
    let report = LinkReport {
        index,
        symbol_count: n,
        errors_leg,
        errors_eve,
        sep_emp_leg: errors_leg as f64 / n as f64,
        sep_emp_eve: errors_eve as f64 / n as f64,
        psnr_bob: psnr(img, &bob)?,
        psnr_eve: psnr(img, &eve)?,
    };
    Ok(FrameOutput { bob, eve, report })
}

/// Pooled results over a list of frames.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignReport {
    pub frames: Vec<LinkReport>,
    pub symbol_count: usize,
    pub sep_emp_leg: f64,
    pub sep_emp_eve: f64,
    pub psnr_bob: PsnrSummary,
    pub psnr_eve: PsnrSummary,
}

/// Sends every image as its own frame (frame number = list position) and
/// pools symbol-weighted SEPs and mean PSNRs. Frames run in parallel; the
/// result does not depend on scheduling.
pub fn run_campaign<T: Scalar>(
    images: &[Image],
    codebook: &Codebook<T>,
    cfg: &LinkConfig<T>,
) -> Result<CampaignReport> {
    if images.is_empty() {
        return Err(Error::InvalidParameter(
            "campaign needs at least one image".into(),
        ));
    }
    let frames = images
        .par_iter()
        .enumerate()
        .map(|(k, img)| transmit_frame_numbered(img, codebook, cfg, k as u64).map(|o| o.report))
        .collect::<Result<Vec<_>>>()?;
    let symbol_count: usize = frames.iter().map(|f| f.symbol_count).sum();
    let errors_leg: usize = frames.iter().map(|f| f.errors_leg).sum();
    let errors_eve: usize = frames.iter().map(|f| f.errors_eve).sum();
    Ok(CampaignReport {
        symbol_count,
        sep_emp_leg: errors_leg as f64 / symbol_count as f64,
        sep_emp_eve: errors_eve as f64 / symbol_count as f64,
        psnr_bob: PsnrSummary::from_values(frames.iter().map(|f| f.psnr_bob)),
        psnr_eve: PsnrSummary::from_values(frames.iter().map(|f| f.psnr_eve)),
        frames,
    })
}
