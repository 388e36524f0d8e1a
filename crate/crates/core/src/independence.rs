//! Normalized HSIC with a linear kernel, and the stage-loss compositions
//! that use it.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major `n × d` matrix; rows are samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix<T> {
    rows: usize,
    cols: usize,
    values: Vec<T>,
}

impl<T: Scalar> SampleMatrix<T> {
    pub fn new(rows: usize, cols: usize, values: Vec<T>) -> Result<Self> {
        if rows < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 samples, got {rows}"
            )));
        }
        if cols == 0 {
            return Err(Error::InvalidParameter("zero feature dimension".into()));
        }
        if values.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                actual: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite sample value".into()));
        }
        Ok(SampleMatrix { rows, cols, values })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch(format!(
                "ragged rows: {} vs {cols} columns",
                bad.len()
            )));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        SampleMatrix {
            rows: self.rows,
            cols: self.cols,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// Dense symmetric `n × n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Gram<T> {
    n: usize,
    values: Vec<T>,
}

impl<T: Scalar> Gram<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.n + j]
    }

    /// `H·K·H` with `H = I − 11ᵀ/n`.
    pub fn centered(&self) -> Self {
        let n = self.n;
        let nf = T::from_usize(n).unwrap();
        let row_mean: Vec<T> = (0..n)
            .map(|i| self.values[i * n..(i + 1) * n].iter().copied().sum::<T>() / nf)
            .collect();
        let grand = row_mean.iter().copied().sum::<T>() / nf;
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                // K is symmetric, so column means equal row means.
                values.push(self.get(i, j) - row_mean[i] - row_mean[j] + grand);
            }
        }
        Gram { n, values }
    }

    /// `tr(A·B)` for symmetric `A`, `B`.
    pub fn trace_product(&self, other: &Self) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| a * b)
            .sum()
    }
}

/// Linear-kernel Gram matrix, `K[i][j] = ⟨x_i, x_j⟩`.
pub fn gram_linear<T: Scalar>(x: &SampleMatrix<T>) -> Gram<T> {
    let n = x.rows;
    let mut values = vec![T::zero(); n * n];
    for i in 0..n {
        for j in i..n {
            let v: T = x.row(i).iter().zip(x.row(j)).map(|(&a, &b)| a * b).sum();
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    Gram { n, values }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Centering {
    /// `K̃ = H·K·H`.
    #[default]
    Centered,
    /// Raw Gram matrices, as the formula is usually printed.
    Uncentered,
}

/// Normalized HSIC between two sample sets, with centered Gram matrices.
pub fn nhsic<T: Scalar>(x: &SampleMatrix<T>, y: &SampleMatrix<T>) -> Result<T> {
    nhsic_with(x, y, Centering::Centered)
}

/// `tr(Kx·Ky)/√(tr(Kx·Kx)·tr(Ky·Ky))`, or 0 when either self-trace is below
/// `1e-12` (constant input).
pub fn nhsic_with<T: Scalar>(
    x: &SampleMatrix<T>,
    y: &SampleMatrix<T>,
    centering: Centering,
) -> Result<T> {
    if x.rows != y.rows {
        return Err(Error::LengthMismatch {
            expected: x.rows,
            actual: y.rows,
        });
    }
    let (mut kx, mut ky) = (gram_linear(x), gram_linear(y));
    if centering == Centering::Centered {
        kx = kx.centered();
        ky = ky.centered();
    }
    let xx = kx.trace_product(&kx);
    let yy = ky.trace_product(&ky);
    let floor = T::lit(1e-12);
    if xx < floor || yy < floor {
        return Ok(T::zero());
    }
    let v = kx.trace_product(&ky) / (xx * yy).sqrt();
    Ok(v.max(T::zero()).min(T::one()))
}

/// Weights of the stage losses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossWeights<T> {
    pub lambda1: T,
    pub lambda2: T,
    pub lambda3: T,
}

impl<T: Scalar> LossWeights<T> {
    pub fn new(lambda1: T, lambda2: T, lambda3: T) -> Result<Self> {
        if [lambda1, lambda2, lambda3]
            .iter()
            .any(|l| !(l.is_finite() && *l >= T::zero()))
        {
            return Err(Error::InvalidParameter(
                "loss weights must be nonnegative and finite".into(),
            ));
        }
        Ok(LossWeights {
            lambda1,
            lambda2,
            lambda3,
        })
    }

    /// `(0.01, 1.0, 1.5)`.
    pub fn reported() -> Self {
        LossWeights {
            lambda1: T::lit(0.01),
            lambda2: T::lit(1.0),
            lambda3: T::lit(1.5),
        }
    }
}

/// Legitimate reconstruction plus the independence penalty.
pub fn loss_stage1<T: Scalar>(mse_bob: T, nhsic_val: T, w: &LossWeights<T>) -> T {
    mse_bob + w.lambda1 * nhsic_val
}

/// Eavesdropper reconstruction loss, on its own.
pub fn loss_stage2<T: Scalar>(mse_eve: T) -> T {
    mse_eve
}

/// Joint loss: rewards Eve's error, penalises Bob's error, dependence and
/// jamming-regeneration error. May be negative.
pub fn loss_stage3<T: Scalar>(
    mse_bob: T,
    nhsic_val: T,
    mse_y2: T,
    mse_eve: T,
    w: &LossWeights<T>,
) -> T {
    mse_bob + w.lambda1 * nhsic_val + w.lambda2 * mse_y2 - w.lambda3 * mse_eve
}
