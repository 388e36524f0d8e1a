//! Closed-form symbol error probabilities for the legitimate receiver (after
//! interference cancellation) and the eavesdropper (16-point ML detection),
//! curve sweeps over the PAC, and PAC planning.
//!
//! Noise is parameterised by `σ`, the standard deviation per real dimension,
//! with `σ² = 10^(−SNR/10)` for unit transmit power.

use crate::constellation::{axis_region, label_axes, super_point, Pac, SuperLabel, SymbolLabel};
use crate::error::{BindingConstraint, Error, Result};
use crate::scalar::Scalar;

/// Standard normal upper tail, `Q(x) = erfc(x/√2)/2`.
#[inline]
pub fn q_function<T: Scalar>(x: T) -> T {
    T::lit(0.5) * (x * T::FRAC_1_SQRT_2()).erfc()
}

/// Per-real-dimension noise standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NoiseSigma<T>(T);

impl<T: Scalar> NoiseSigma<T> {
    pub fn new(sigma: T) -> Result<Self> {
        if sigma.is_finite() && sigma > T::zero() {
            Ok(NoiseSigma(sigma))
        } else {
            Err(Error::InvalidParameter(format!(
                "noise sigma {sigma} must be positive and finite"
            )))
        }
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }
}

/// `σ = √(10^(−snr_db/10))` for unit signal power.
pub fn sigma_from_snr<T: Scalar>(snr_db: T) -> Result<NoiseSigma<T>> {
    if !snr_db.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "snr {snr_db} dB is not finite"
        )));
    }
    NoiseSigma::new(T::lit(10.0).powf(-snr_db / T::lit(20.0)))
}

/// Legitimate SEP after perfect cancellation: `1 − Q(−d1/σ)²`.
///
/// Evaluated as `q(2 − q)` with `q = Q(d1/σ)` so it stays accurate at high SNR.
pub fn sep_legitimate<T: Scalar>(a: Pac<T>, sigma: NoiseSigma<T>) -> T {
    let q = q_function(a.d1() / sigma.value());
    q * (T::lit(2.0) - q)
}

/// Probability that `c + n`, `n ~ N(0, σ²)`, lands in `[lo, hi)`.
#[inline]
fn interval_probability<T: Scalar>(c: T, lo: T, hi: T, sigma: T) -> T {
    q_function((lo - c) / sigma) - q_function((hi - c) / sigma)
}

/// Probability that the eavesdropper decides a wrong outer symbol when
/// `sent` is transmitted: the Gaussian mass of the twelve decision rectangles
/// whose outer bits differ from the transmitted ones.
pub fn eve_error_rectangles<T: Scalar>(sent: SuperLabel, a: Pac<T>, sigma: NoiseSigma<T>) -> T {
    let p = super_point(sent, a);
    let s = sigma.value();
    SuperLabel::all()
        .filter(|region| region.outer != sent.outer)
        .map(|region| {
            let (in_re, in_im) = label_axes(region.inner);
            let (out_re, out_im) = label_axes(region.outer);
            let (xlo, xhi) = axis_region(in_re, out_re, a);
            let (ylo, yhi) = axis_region(in_im, out_im, a);
            interval_probability(p.re, xlo, xhi, s) * interval_probability(p.im, ylo, yhi, s)
        })
        .sum()
}

/// Probability that the eavesdropper decides the right outer symbol when
/// `sent` is transmitted, summed over the four decision rectangles that carry
/// the transmitted outer bits.
pub fn eve_scp_rectangles<T: Scalar>(sent: SuperLabel, a: Pac<T>, sigma: NoiseSigma<T>) -> T {
    let p = super_point(sent, a);
    let (out_re, out_im) = label_axes(sent.outer);
    let s = sigma.value();
    SymbolLabel::ALL
        .iter()
        .map(|&inner| {
            let (in_re, in_im) = label_axes(inner);
            let (xlo, xhi) = axis_region(in_re, out_re, a);
            let (ylo, yhi) = axis_region(in_im, out_im, a);
            interval_probability(p.re, xlo, xhi, s) * interval_probability(p.im, ylo, yhi, s)
        })
        .sum()
}

/// Eavesdropper SEP by direct integration over the ML rectangles, averaged
/// over all 16 equiprobable transmitted composites.
pub fn sep_eavesdropper<T: Scalar>(a: Pac<T>, sigma: NoiseSigma<T>) -> T {
    let total: T = SuperLabel::all()
        .map(|s| eve_error_rectangles(s, a, sigma))
        .sum();
    total / T::lit(16.0)
}

/// The four region terms for transmitted `"0010"` (inner 00, outer 10),
/// in the order regions `0010`, `1010`, `1110`, `0110`.
pub fn eve_scp_0010_terms<T: Scalar>(a: Pac<T>, sigma: NoiseSigma<T>) -> [T; 4] {
    let (d1, d2, s) = (a.d1(), a.d2(), sigma.value());
    let q = |x: T| q_function(x / s);
    let two = T::lit(2.0);
    let near_inner = q(-(d2 - d1)) - q(d1);
    let far_outer = q(-d1);
    let wrap_far = q(two * d2 - d1);
    let wrap_near = q(-(d1 + two * d2)) - q(-(d1 + d2));
    [
        near_inner * far_outer,
        wrap_far * far_outer,
        wrap_far * wrap_near,
        near_inner * wrap_near,
    ]
}

/// Per-axis probability of landing on the wrong outer sign, for an axis
/// coordinate at `d2 + d1` ("far") and at `d2 − d1` ("near").
///
/// These are the complements of the per-axis factors of the `"0010"` terms:
/// far correct = `Q(−d1/σ) + [Q(−(d1+2d2)/σ) − Q(−(d1+d2)/σ)]`, near correct =
/// `[Q(−(d2−d1)/σ) − Q(d1/σ)] + Q((2d2−d1)/σ)`.
fn axis_error<T: Scalar>(a: Pac<T>, sigma: NoiseSigma<T>) -> (T, T) {
    let (d1, d2, s) = (a.d1(), a.d2(), sigma.value());
    let q = |x: T| q_function(x / s);
    let two = T::lit(2.0);
    let far = q(d1) - (q(d1 + d2) - q(d1 + two * d2));
    let near = q(d1) + q(d2 - d1) - q(two * d2 - d1);
    (far, near)
}

/// Eavesdropper SEP from the closed-form per-axis terms with inner symbol
/// `00`; by symmetry this is the overall SEP.
pub fn sep_eavesdropper_closed_form<T: Scalar>(a: Pac<T>, sigma: NoiseSigma<T>) -> T {
    let (far, near) = axis_error(a, sigma);
    let sep: T = SymbolLabel::ALL
        .iter()
        .map(|&outer| {
            // inner 00 sits in (+, +); a negative outer axis pulls the point
            // to the near coordinate on that axis.
            let (re_neg, im_neg) = label_axes(outer);
            let ex = if re_neg { near } else { far };
            let ey = if im_neg { near } else { far };
            ex + ey - ex * ey
        })
        .sum();
    sep / T::lit(4.0)
}

/// Analytic SEPs at one `(a, SNR)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SepPoint<T> {
    pub a: T,
    pub snr_db: T,
    pub sep_leg: T,
    pub sep_eve: T,
}

impl<T: Scalar> SepPoint<T> {
    pub fn evaluate(a: Pac<T>, snr_db: T) -> Result<Self> {
        let sigma = sigma_from_snr(snr_db)?;
        Ok(SepPoint {
            a: a.value(),
            snr_db,
            sep_leg: sep_legitimate(a, sigma),
            sep_eve: sep_eavesdropper(a, sigma),
        })
    }
}

/// SEP points at one SNR, ordered by increasing `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct SepCurve<T> {
    pub snr_db: T,
    pub points: Vec<SepPoint<T>>,
}

impl<T: Scalar> SepCurve<T> {
    /// Grid point with the smallest eavesdropper SEP.
    pub fn eve_minimum(&self) -> Option<&SepPoint<T>> {
        self.points
            .iter()
            .min_by(|x, y| x.sep_eve.partial_cmp(&y.sep_eve).unwrap())
    }
}

/// Evaluates both analytic SEPs on a strictly increasing PAC grid.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn sweep_curve<T: Scalar>(snr_db: T, a_grid: &[T]) -> Result<SepCurve<T>> {
    if a_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter(
            "PAC grid must be strictly increasing".into(),
        ));
    }
    let points = a_grid
        .iter()
        .map(|&a| SepPoint::evaluate(Pac::new(a)?, snr_db))
        .collect::<Result<Vec<_>>>()?;
    Ok(SepCurve { snr_db, points })
}

/// Evenly spaced grid `a_min..=a_max` with `steps` points.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn linear_grid<T: Scalar>(a_min: T, a_max: T, steps: usize) -> Result<Vec<T>> {
    if steps < 2 {
        return Err(Error::InvalidParameter(
            "grid needs at least 2 steps".into(),
        ));
    }
    if !(a_min < a_max) {
        return Err(Error::InvalidParameter(format!(
            "grid range [{a_min}, {a_max}] is empty"
        )));
    }
    let span = a_max - a_min;
    let last = T::from_usize(steps - 1).unwrap();
    Ok((0..steps)
        .map(|i| {
            if i == steps - 1 {
                a_max
            } else {
                a_min + span * T::from_usize(i).unwrap() / last
            }
        })
        .collect())
}

/// Resolution of the PAC planning grid.
pub const PLAN_RESOLUTION: f64 = 1e-4;

/// Planned PAC together with the SEPs it achieves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacPlan<T> {
    pub pac: Pac<T>,
    pub sep_leg: T,
    pub sep_eve: T,
}

/// Largest `a` on the `1e-4` grid in `(0, 0.5)` whose eavesdropper SEP is at
/// least `min_eve_sep` and, if given, whose legitimate SEP is at most
/// `max_leg_sep`.
///
/// The legitimate SEP falls as `a` grows, so the largest feasible `a` is the
/// best one for Bob.
pub fn plan_pac<T: Scalar>(
    snr_db: T,
    min_eve_sep: T,
    max_leg_sep: Option<T>,
) -> Result<PacPlan<T>> {
    if !(min_eve_sep >= T::zero() && min_eve_sep < T::one()) {
        return Err(Error::InvalidParameter(format!(
            "min eavesdropper SEP {min_eve_sep} outside [0, 1)"
        )));
    }
    if let Some(m) = max_leg_sep {
        if !(m >= T::zero() && m <= T::one()) {
            return Err(Error::InvalidParameter(format!(
                "max legitimate SEP {m} outside [0, 1]"
            )));
        }
    }
    let sigma = sigma_from_snr(snr_db)?;
    let steps = (0.5 / PLAN_RESOLUTION).round() as u32;

    let mut best_eve = T::neg_infinity();
    let mut eve_met = false;
    let mut best_leg = T::infinity();
    for k in (1..steps).rev() {
        let pac = Pac::new(T::lit(k as f64 / 1e4))?;
        let sep_eve = sep_eavesdropper(pac, sigma);
        best_eve = best_eve.max(sep_eve);
        if sep_eve < min_eve_sep {
            continue;
        }
        eve_met = true;
        let sep_leg = sep_legitimate(pac, sigma);
        best_leg = best_leg.min(sep_leg);
        if max_leg_sep.is_none_or(|m| sep_leg <= m) {
            return Ok(PacPlan {
                pac,
                sep_leg,
                sep_eve,
            });
        }
    }
    if eve_met {
        Err(Error::Infeasible {
            constraint: BindingConstraint::MaxLegSep,
            best: best_leg.to_f64_lossy(),
        })
    } else {
        Err(Error::Infeasible {
            constraint: BindingConstraint::MinEveSep,
            best: best_eve.to_f64_lossy(),
        })
    }
}
