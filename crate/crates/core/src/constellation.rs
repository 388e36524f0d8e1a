//! 4-QAM outer map, 16-point superposition map, ML detection and
//! interference cancellation.
//!
//! Labeling (quadrant of the unit-power point `(±1±j)/√2`):
//!
//! | bits | quadrant |
//! |------|----------|
//! | 00   | (+, +)   |
//! | 01   | (−, +)   |
//! | 10   | (+, −)   |
//! | 11   | (−, −)   |
//!
//! The low bit selects the sign of the real part, the high bit the sign of
//! the imaginary part.

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One complex channel sample.
pub type ComplexSample<T> = Complex<T>;

/// Power allocation coefficient `a ∈ (0, 0.5)`.
///
/// The outer (message) code gets `√a` of the amplitude, the inner (jamming)
/// code `√(1−a)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Pac<T>(T);

impl<T: Scalar> Pac<T> {
    pub fn new(a: T) -> Result<Self> {
        if a.is_finite() && a > T::zero() && a < T::lit(0.5) {
            Ok(Pac(a))
        } else {
            Err(Error::InvalidPac(a.to_f64_lossy()))
        }
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }

    /// Per-axis offset of the outer point from its inner point, `√(a/2)`.
    #[inline]
    pub fn d1(self) -> T {
        (self.0 / T::lit(2.0)).sqrt()
    }

    /// Per-axis offset of the inner point from the origin, `√((1−a)/2)`.
    #[inline]
    pub fn d2(self) -> T {
        ((T::one() - self.0) / T::lit(2.0)).sqrt()
    }

    #[inline]
    pub fn outer_amplitude(self) -> T {
        self.0.sqrt()
    }

    #[inline]
    pub fn inner_amplitude(self) -> T {
        (T::one() - self.0).sqrt()
    }
}

/// Two-bit 4-QAM label, used for both the outer and the inner symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolLabel(u8);

impl SymbolLabel {
    pub const ALL: [SymbolLabel; 4] = [
        SymbolLabel(0b00),
        SymbolLabel(0b01),
        SymbolLabel(0b10),
        SymbolLabel(0b11),
    ];

    pub fn new(bits: u8) -> Result<Self> {
        if bits < 4 {
            Ok(SymbolLabel(bits))
        } else {
            Err(Error::InvalidParameter(format!(
                "label {bits} is not a 2-bit value"
            )))
        }
    }

    /// Keeps the low two bits of `bits`.
    #[inline]
    pub fn from_low_bits(bits: u8) -> Self {
        SymbolLabel(bits & 0b11)
    }

    #[inline]
    pub fn bits(self) -> u8 {
        self.0
    }

    /// Signs of the quadrant as `(re_negative, im_negative)`.
    #[inline]
    fn negative_axes(self) -> (bool, bool) {
        (self.0 & 0b01 != 0, self.0 & 0b10 != 0)
    }

    #[inline]
    fn from_negative_axes(re_neg: bool, im_neg: bool) -> Self {
        SymbolLabel(re_neg as u8 | ((im_neg as u8) << 1))
    }
}

impl fmt::Display for SymbolLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02b}", self.0)
    }
}

/// Composite label of the 16-point map.
///
/// Text form is inner bits followed by outer bits, so `"0010"` is inner `00`
/// with outer `10`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SuperLabel {
    pub inner: SymbolLabel,
    pub outer: SymbolLabel,
}

impl SuperLabel {
    pub fn new(inner: SymbolLabel, outer: SymbolLabel) -> Self {
        SuperLabel { inner, outer }
    }

    /// Four-bit code `inner << 2 | outer`.
    pub fn code(self) -> u8 {
        (self.inner.0 << 2) | self.outer.0
    }

    pub fn from_code(code: u8) -> Self {
        SuperLabel {
            inner: SymbolLabel::from_low_bits(code >> 2),
            outer: SymbolLabel::from_low_bits(code),
        }
    }

    pub fn all() -> impl Iterator<Item = SuperLabel> {
        (0u8..16).map(SuperLabel::from_code)
    }
}

impl fmt::Display for SuperLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.inner, self.outer)
    }
}

impl std::str::FromStr for SuperLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("{s:?} is not a 4-bit label"));
        if s.len() != 4 {
            return Err(bad());
        }
        let code = u8::from_str_radix(s, 2).map_err(|_| bad())?;
        Ok(SuperLabel::from_code(code))
    }
}

/// Labels paired with their constellation points.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSeq<T> {
    labels: Vec<SymbolLabel>,
    points: Vec<ComplexSample<T>>,
}

impl<T: Scalar> SymbolSeq<T> {
    /// Maps each label through the unit-power 4-QAM table.
    pub fn from_labels(labels: Vec<SymbolLabel>) -> Self {
        let points = labels.iter().map(|&l| outer_point(l)).collect();
        SymbolSeq { labels, points }
    }

    pub fn labels(&self) -> &[SymbolLabel] {
        &self.labels
    }

    pub fn points(&self) -> &[ComplexSample<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn average_power(&self) -> T {
        if self.points.is_empty() {
            return T::zero();
        }
        let total: T = self.points.iter().map(|p| p.norm_sqr()).sum();
        total / T::from_usize(self.points.len()).unwrap()
    }
}

#[inline]
fn signed<T: Scalar>(magnitude: T, negative: bool) -> T {
    if negative {
        -magnitude
    } else {
        magnitude
    }
}

/// Unit-power 4-QAM point for `label`.
pub fn outer_point<T: Scalar>(label: SymbolLabel) -> ComplexSample<T> {
    let (re_neg, im_neg) = label.negative_axes();
    let h = T::FRAC_1_SQRT_2();
    Complex::new(signed(h, re_neg), signed(h, im_neg))
}

/// `√a·y1 + √(1−a)·y2`.
#[inline]
pub fn superpose<T: Scalar>(
    y1: ComplexSample<T>,
    y2: ComplexSample<T>,
    a: Pac<T>,
) -> ComplexSample<T> {
    y1 * a.outer_amplitude() + y2 * a.inner_amplitude()
}

/// Point of the 16-point superposition map.
pub fn super_point<T: Scalar>(s: SuperLabel, a: Pac<T>) -> ComplexSample<T> {
    superpose(outer_point(s.outer), outer_point(s.inner), a)
}

/// Quadrant decision; a zero coordinate counts as positive.
#[inline]
pub fn ml_detect_outer<T: Scalar>(sample: ComplexSample<T>) -> SymbolLabel {
    SymbolLabel::from_negative_axes(sample.re < T::zero(), sample.im < T::zero())
}

/// Per-axis decision on the superposition map: `(inner_negative, outer_negative)`.
///
/// Thresholds sit at `−d2, 0, d2`. On a threshold the point with the larger
/// coordinate wins.
#[inline]
fn detect_axis<T: Scalar>(x: T, d2: T) -> (bool, bool) {
    if x >= d2 {
        (false, false)
    } else if x >= T::zero() {
        (false, true)
    } else if x >= -d2 {
        (true, false)
    } else {
        (true, true)
    }
}

/// Nearest point of the 16-point map, via the rectangle decision regions.
pub fn ml_detect_super<T: Scalar>(sample: ComplexSample<T>, a: Pac<T>) -> SuperLabel {
    let d2 = a.d2();
    let (in_re, out_re) = detect_axis(sample.re, d2);
    let (in_im, out_im) = detect_axis(sample.im, d2);
    SuperLabel {
        inner: SymbolLabel::from_negative_axes(in_re, in_im),
        outer: SymbolLabel::from_negative_axes(out_re, out_im),
    }
}

/// Eavesdropper decision: outer bits of the 16-point ML decision.
#[inline]
pub fn eve_detect_outer<T: Scalar>(sample: ComplexSample<T>, a: Pac<T>) -> SymbolLabel {
    ml_detect_super(sample, a).outer
}

/// Removes the known jamming component: `(s1 − √(1−a)·ŷ2)/√a`.
#[inline]
pub fn cancel_interference<T: Scalar>(
    s1: ComplexSample<T>,
    y2_hat: ComplexSample<T>,
    a: Pac<T>,
) -> ComplexSample<T> {
    (s1 - y2_hat * a.inner_amplitude()) / a.outer_amplitude()
}

/// Per-axis decision intervals of the 16-point map as `[lo, hi)` bounds,
/// indexed by `(inner_negative, outer_negative)`.
pub fn axis_region<T: Scalar>(inner_negative: bool, outer_negative: bool, a: Pac<T>) -> (T, T) {
    let d2 = a.d2();
    match (inner_negative, outer_negative) {
        (false, false) => (d2, T::infinity()),
        (false, true) => (T::zero(), d2),
        (true, false) => (-d2, T::zero()),
        (true, true) => (T::neg_infinity(), -d2),
    }
}

/// Per-axis sign pattern of a label as `(re_negative, im_negative)`.
pub fn label_axes(label: SymbolLabel) -> (bool, bool) {
    label.negative_axes()
}
