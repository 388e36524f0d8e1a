//! MSE, PSNR and empirical SEP.

use std::fmt;

use crate::codec::Image;
use crate::constellation::SymbolLabel;
use crate::error::{Error, Result};

/// Peak pixel value used by PSNR for all byte images.
pub const PSNR_PEAK: f64 = 255.0;

fn same_shape(a: &Image, b: &Image) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(format!(
            "{:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(())
}

pub fn mse(a: &Image, b: &Image) -> Result<f64> {
    same_shape(a, b)?;
    let sum: f64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d
        })
        .sum();
    Ok(sum / a.pixels().len() as f64)
}

/// PSNR in dB; identical images give `Infinite` instead of a capped value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psnr {
    Finite(f64),
    Infinite,
}

impl Psnr {
    pub fn from_mse(mse: f64) -> Self {
        if mse == 0.0 {
            Psnr::Infinite
        } else {
            Psnr::Finite(10.0 * (PSNR_PEAK * PSNR_PEAK / mse).log10())
        }
    }

    pub fn db(self) -> f64 {
        match self {
            Psnr::Finite(v) => v,
            Psnr::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Psnr::Infinite)
    }
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Finite(v) => write!(f, "{v}"),
            Psnr::Infinite => f.write_str("inf"),
        }
    }
}

pub fn psnr(a: &Image, b: &Image) -> Result<Psnr> {
    Ok(Psnr::from_mse(mse(a, b)?))
}

/// Mean of the finite PSNR values; infinite ones are counted, not averaged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsnrSummary {
    pub mean_finite_db: Option<f64>,
    pub finite: usize,
    pub infinite: usize,
}

impl PsnrSummary {
    pub fn from_values(values: impl IntoIterator<Item = Psnr>) -> Self {
        let (mut sum, mut finite, mut infinite) = (0.0, 0usize, 0usize);
        for v in values {
            match v {
                Psnr::Finite(db) => {
                    sum += db;
                    finite += 1;
                }
                Psnr::Infinite => infinite += 1,
            }
        }
        PsnrSummary {
            mean_finite_db: (finite > 0).then(|| sum / finite as f64),
            finite,
            infinite,
        }
    }

    /// The summary as a single PSNR: infinite only if every frame was.
    pub fn as_psnr(&self) -> Psnr {
        match self.mean_finite_db {
            Some(db) => Psnr::Finite(db),
            None => Psnr::Infinite,
        }
    }
}

/// Number of positions where the label lists differ.
pub fn symbol_errors(sent: &[SymbolLabel], detected: &[SymbolLabel]) -> Result<usize> {
    if sent.len() != detected.len() {
        return Err(Error::LengthMismatch {
            expected: sent.len(),
            actual: detected.len(),
        });
    }
    Ok(sent.iter().zip(detected).filter(|(a, b)| a != b).count())
}

/// Fraction of positions where the label lists differ.
pub fn empirical_sep(sent: &[SymbolLabel], detected: &[SymbolLabel]) -> Result<f64> {
    if sent.is_empty() {
        return Err(Error::InvalidParameter("empty label list".into()));
    }
    Ok(symbol_errors(sent, detected)? as f64 / sent.len() as f64)
}

/// Half-width of the 3σ binomial interval around `p` at `n` trials.
pub fn binomial_half_width(p: f64, n: u64) -> f64 {
    3.0 * (p * (1.0 - p) / n as f64).sqrt()
}
