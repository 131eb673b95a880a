//! Coefficient thresholding and trailing-zero run-length encoding.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::transform::{CoefficientWindow, COEFF_FRAC_BITS};

/// A transform coefficient as seen by the thresholding stage.
pub trait Coefficient: Copy + PartialEq + Debug + Send + Sync {
    const ZERO: Self;

    /// Magnitude in orthonormal DCT units of the normalized waveform.
    fn magnitude(self) -> f64;
}

/// A coefficient type that can be stored in a compressed slot.
pub trait Slot: Coefficient {
    /// Reserved value marking the RLE codeword.
    const SENTINEL: Self;

    fn is_sentinel(self) -> bool;
}

const INT_UNIT: f64 = (1u32 << COEFF_FRAC_BITS) as f64;

impl Coefficient for i32 {
    const ZERO: Self = 0;

    fn magnitude(self) -> f64 {
        (self as f64).abs() / INT_UNIT
    }
}

impl Coefficient for i16 {
    const ZERO: Self = 0;

    fn magnitude(self) -> f64 {
        (self as f64).abs() / INT_UNIT
    }
}

impl Coefficient for f64 {
    const ZERO: Self = 0.0;

    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Slot for i16 {
    const SENTINEL: Self = i16::MIN;

    fn is_sentinel(self) -> bool {
        self == i16::MIN
    }
}

impl Slot for f64 {
    const SENTINEL: Self = f64::NEG_INFINITY;

    fn is_sentinel(self) -> bool {
        self == f64::NEG_INFINITY
    }
}

/// Clamps an integer coefficient into the legal 16-bit slot range, which
/// excludes the sentinel.
pub fn clamp_coefficient(v: i32) -> i16 {
    v.clamp(-(i16::MAX as i32), i16::MAX as i32) as i16
}

/// Zeroes every value whose magnitude is below `t`.
pub fn threshold<T: Coefficient>(y: &CoefficientWindow<T>, t: f64) -> CoefficientWindow<T> {
    CoefficientWindow {
        values: threshold_values(&y.values, t),
        scale: y.scale,
    }
}

pub(crate) fn threshold_values<T: Coefficient>(values: &[T], t: f64) -> Vec<T> {
    values
        .iter()
        .map(|&v| if v.magnitude() < t { T::ZERO } else { v })
        .collect()
}

/// Marks a run of trailing zero coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RleCodeword {
    pub zero_count: usize,
}

impl RleCodeword {
    pub fn signature<T: Slot>() -> T {
        T::SENTINEL
    }
}

/// One window after RLE: the coefficients up to the last non-zero one,
/// then at most one codeword covering the zero tail.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedWindow<T> {
    pub coefficients: Vec<T>,
    pub rle: Option<RleCodeword>,
}

impl<T: Slot> CompressedWindow<T> {
    pub fn occupied_slots(&self) -> usize {
        self.coefficients.len() + usize::from(self.rle.is_some())
    }

    /// Lays the window out in `width` slots: coefficients, the sentinel,
    /// then zero padding.
    pub fn to_slots(&self, width: usize) -> Vec<T> {
        debug_assert!(self.occupied_slots() <= width);
        let mut slots = Vec::with_capacity(width);
        slots.extend_from_slice(&self.coefficients);
        if self.rle.is_some() {
            slots.push(T::SENTINEL);
        }
        slots.resize(width, T::ZERO);
        slots
    }

    /// Parses a slot layout produced by [`to_slots`](Self::to_slots).
    pub fn from_slots(slots: &[T], window_size: usize, window: usize) -> Result<Self> {
        match slots.iter().position(|s| s.is_sentinel()) {
            Some(p) => {
                if p >= window_size {
                    return Err(Error::corrupt(window, "codeword with an empty zero run"));
                }
                if slots[p + 1..].iter().any(|&s| s != T::ZERO) {
                    return Err(Error::corrupt(window, "non-zero padding after codeword"));
                }
                Ok(CompressedWindow {
                    coefficients: slots[..p].to_vec(),
                    rle: Some(RleCodeword {
                        zero_count: window_size - p,
                    }),
                })
            }
            None if slots.len() == window_size => Ok(CompressedWindow {
                coefficients: slots.to_vec(),
                rle: None,
            }),
            None => Err(Error::corrupt(
                window,
                format!(
                    "{} slots without a codeword cannot fill a {window_size}-sample window",
                    slots.len()
                ),
            )),
        }
    }
}

/// Replaces the longest all-zero suffix of `y` with one codeword.
pub fn rle_encode<T: Slot>(y: &[T]) -> CompressedWindow<T> {
    let kept = y.iter().rposition(|&v| v != T::ZERO).map_or(0, |p| p + 1);
    CompressedWindow {
        coefficients: y[..kept].to_vec(),
        rle: (kept < y.len()).then(|| RleCodeword {
            zero_count: y.len() - kept,
        }),
    }
}

/// Expands a window back to `window_size` coefficients.
pub fn rle_decode<T: Slot>(w: &CompressedWindow<T>, window_size: usize) -> Result<Vec<T>> {
    decode_window(w, window_size, 0)
}

pub(crate) fn decode_window<T: Slot>(
    w: &CompressedWindow<T>,
    window_size: usize,
    window: usize,
) -> Result<Vec<T>> {
    let zeros = match w.rle {
        Some(RleCodeword { zero_count: 0 }) => {
            return Err(Error::corrupt(window, "codeword with an empty zero run"))
        }
        Some(c) => c.zero_count,
        None => 0,
    };
    if w.coefficients.len() + zeros != window_size {
        return Err(Error::corrupt(
            window,
            format!(
                "{} coefficients plus {zeros} zeros do not make a {window_size}-sample window",
                w.coefficients.len()
            ),
        ));
    }
    if w.coefficients.iter().any(|c| c.is_sentinel()) {
        return Err(Error::corrupt(window, "sentinel inside coefficient data"));
    }
    let mut out = w.coefficients.clone();
    out.resize(window_size, T::ZERO);
    Ok(out)
}
