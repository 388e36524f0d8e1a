//! Reference message codec: bytes to 4-QAM labels and back.
//!
//! Raw mode slices every byte into four 2-bit labels, most significant pair
//! first. Block-mean mode first averages `k×k` pixel blocks per channel, then
//! slices the averaged bytes the same way.

use crate::constellation::{SymbolLabel, SymbolSeq};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major 8-bit image with 1 (gray) or 3 (RGB) interleaved channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    pixels: Vec<u8>,
}

impl Image {
    pub fn new(width: usize, height: usize, channels: usize, pixels: Vec<u8>) -> Result<Self> {
        if channels != 1 && channels != 3 {
            return Err(Error::ShapeMismatch(format!(
                "{channels} channels; expected 1 or 3"
            )));
        }
        if width == 0 || height == 0 {
            return Err(Error::ShapeMismatch("image has zero extent".into()));
        }
        let expected = width * height * channels;
        if pixels.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: pixels.len(),
            });
        }
        Ok(Image {
            width,
            height,
            channels,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn shape(&self) -> Shape {
        Shape {
            height: self.height,
            width: self.width,
            channels: self.channels,
        }
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }
}

/// `(H, W, C)` of an image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub height: usize,
    pub width: usize,
    pub channels: usize,
}

impl Shape {
    pub fn samples(&self) -> usize {
        self.height * self.width * self.channels
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodecMode {
    Raw,
    /// `k×k` block means; `k ≥ 1` must divide both dimensions.
    BlockMean(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodecSpec {
    pub mode: CodecMode,
}

impl CodecSpec {
    pub const RAW: CodecSpec = CodecSpec {
        mode: CodecMode::Raw,
    };

    pub fn block_mean(k: usize) -> Self {
        CodecSpec {
            mode: CodecMode::BlockMean(k),
        }
    }

    fn block(&self) -> usize {
        match self.mode {
            CodecMode::Raw => 1,
            CodecMode::BlockMean(k) => k,
        }
    }

    fn check(&self, shape: Shape) -> Result<()> {
        let k = self.block();
        if k == 0 {
            return Err(Error::InvalidParameter("block size must be ≥ 1".into()));
        }
        if !shape.height.is_multiple_of(k) || !shape.width.is_multiple_of(k) {
            return Err(Error::ShapeMismatch(format!(
                "block size {k} does not divide {}×{}",
                shape.height, shape.width
            )));
        }
        Ok(())
    }

    /// Number of complex symbols produced for an image of this shape.
    pub fn symbol_count(&self, shape: Shape) -> Result<usize> {
        self.check(shape)?;
        let k = self.block();
        Ok(4 * shape.samples() / (k * k))
    }

    /// Complex channel symbols per real source sample, `L/(H·W·C)`.
    pub fn compression_ratio(&self, shape: Shape) -> Result<f64> {
        Ok(self.symbol_count(shape)? as f64 / shape.samples() as f64)
    }
}

fn byte_to_labels(b: u8) -> [SymbolLabel; 4] {
    [
        SymbolLabel::from_low_bits(b >> 6),
        SymbolLabel::from_low_bits(b >> 4),
        SymbolLabel::from_low_bits(b >> 2),
        SymbolLabel::from_low_bits(b),
    ]
}

fn labels_to_byte(l: &[SymbolLabel]) -> u8 {
    l.iter().fold(0u8, |acc, x| (acc << 2) | x.bits())
}

/// Block means per channel, rounded half up.
fn downsample(img: &Image, k: usize) -> Vec<u8> {
    let (h, w, c) = (img.height, img.width, img.channels);
    let (bh, bw) = (h / k, w / k);
    let n = (k * k) as u32;
    let mut out = Vec::with_capacity(bh * bw * c);
    for by in 0..bh {
        for bx in 0..bw {
            for ch in 0..c {
                let mut sum = 0u32;
                for y in by * k..(by + 1) * k {
                    for x in bx * k..(bx + 1) * k {
                        sum += img.pixels[(y * w + x) * c + ch] as u32;
                    }
                }
                out.push(((sum + n / 2) / n) as u8);
            }
        }
    }
    out
}

fn upsample(small: &[u8], shape: Shape, k: usize) -> Vec<u8> {
    let (h, w, c) = (shape.height, shape.width, shape.channels);
    let bw = w / k;
    let mut out = Vec::with_capacity(h * w * c);
    for y in 0..h {
        for x in 0..w {
            let base = ((y / k) * bw + x / k) * c;
            out.extend_from_slice(&small[base..base + c]);
        }
    }
    out
}

/// Encodes an image into outer 4-QAM labels and points.
pub fn encode<T: Scalar>(img: &Image, spec: &CodecSpec) -> Result<SymbolSeq<T>> {
    spec.check(img.shape())?;
    let bytes = match spec.mode {
        CodecMode::Raw => img.pixels.clone(),
        CodecMode::BlockMean(k) => downsample(img, k),
    };
    let labels = bytes.iter().flat_map(|&b| byte_to_labels(b)).collect();
    Ok(SymbolSeq::from_labels(labels))
}

/// Rebuilds an image from detected labels.
pub fn decode(labels: &[SymbolLabel], shape: Shape, spec: &CodecSpec) -> Result<Image> {
    let expected = spec.symbol_count(shape)?;
    if labels.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: labels.len(),
        });
    }
    let bytes: Vec<u8> = labels.chunks_exact(4).map(labels_to_byte).collect();
    let pixels = match spec.mode {
        CodecMode::Raw => bytes,
        CodecMode::BlockMean(k) => upsample(&bytes, shape, k),
    };
    Image::new(shape.width, shape.height, shape.channels, pixels)
}
