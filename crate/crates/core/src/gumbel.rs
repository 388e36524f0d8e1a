//! Gumbel-Softmax sampling over the four 4-QAM symbols.
//!
//! Deviates for draw `index` are `−ln(−ln u)` for four uniforms read from
//! words `8·index..8·index+8` of the stream `(seed, STREAM_GUMBEL)`, each
//! uniform clamped to `[1e-15, 1 − 1e-15]`. The soft and hard samplers read
//! the same deviates for the same `(seed, index)`.

use num_complex::Complex;

use crate::constellation::ComplexSample;
use crate::error::{Error, Result};
use crate::rng::{CounterRng, STREAM_GUMBEL};
use crate::scalar::Scalar;

const WORDS_PER_DRAW: u32 = 8;
const CLAMP: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CategoryLogits<T>([T; 4]);

impl<T: Scalar> CategoryLogits<T> {
    pub fn new(logits: [T; 4]) -> Result<Self> {
        if logits.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidParameter("logits must be finite".into()));
        }
        Ok(CategoryLogits(logits))
    }

    pub fn values(&self) -> [T; 4] {
        self.0
    }

    /// Category probabilities `softmax(logits)`.
    pub fn probabilities(&self) -> [T; 4] {
        softmax(self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Temperature<T>(T);

impl<T: Scalar> Temperature<T> {
    pub fn new(tau: T) -> Result<Self> {
        if tau.is_finite() && tau > T::zero() {
            Ok(Temperature(tau))
        } else {
            Err(Error::InvalidParameter(format!(
                "temperature {tau} must be positive"
            )))
        }
    }

    pub fn value(self) -> T {
        self.0
    }
}

fn softmax<T: Scalar>(z: [T; 4]) -> [T; 4] {
    let m = z.iter().copied().fold(T::neg_infinity(), T::max);
    let e = z.map(|v| (v - m).exp());
    let s: T = e.iter().copied().sum();
    e.map(|v| v / s)
}

fn argmax<T: Scalar>(z: &[T; 4]) -> usize {
    (1..4).fold(0, |best, i| if z[i] > z[best] { i } else { best })
}

/// Four Gumbel(0, 1) deviates for draw `index`.
pub fn gumbel_noise(seed: u64, index: u64) -> [f64; 4] {
    let mut rng = CounterRng::at(seed, STREAM_GUMBEL, index, WORDS_PER_DRAW);
    std::array::from_fn(|_| {
        let u = rng.uniform().clamp(CLAMP, 1.0 - CLAMP);
        -(-u.ln()).ln()
    })
}

fn perturbed<T: Scalar>(logits: &CategoryLogits<T>, seed: u64, index: u64) -> [T; 4] {
    let g = gumbel_noise(seed, index);
    std::array::from_fn(|i| logits.0[i] + T::lit(g[i]))
}

/// `softmax((logits + g)/τ)`.
pub fn gumbel_softmax_sample<T: Scalar>(
    logits: &CategoryLogits<T>,
    tau: Temperature<T>,
    seed: u64,
    index: u64,
) -> [T; 4] {
    softmax(perturbed(logits, seed, index).map(|v| v / tau.0))
}

/// `argmax(logits + g)`, distributed as `categorical(softmax(logits))`.
pub fn hard_sample<T: Scalar>(logits: &CategoryLogits<T>, seed: u64, index: u64) -> usize {
    argmax(&perturbed(logits, seed, index))
}

/// Category `c` in the order `(1+1j, 1−1j, −1+1j, −1−1j)`, scaled to unit
/// power.
pub fn category_to_symbol<T: Scalar>(c: usize) -> Result<ComplexSample<T>> {
    let h = T::FRAC_1_SQRT_2();
    let (re, im) = match c {
        0 => (h, h),
        1 => (h, -h),
        2 => (-h, h),
        3 => (-h, -h),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "category {c} outside 0..4"
            )))
        }
    };
    Ok(Complex::new(re, im))
}
