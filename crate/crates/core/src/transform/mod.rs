//! Forward and inverse DCTs: arbitrary-length floating point (DCT-N),
//! windowed floating point (DCT-W) and the windowed multiplier-free integer
//! transform (int-DCT-W).
//!
//! All floating-point transforms use the orthonormal DCT-II/DCT-III pair
//! (DC weight `1/sqrt(N)`, AC weight `sqrt(2/N)`), so inverse(forward(x))
//! reconstructs `x` and the transform preserves energy.

mod float;
mod integer;

use std::fmt;
use std::ops::AddAssign;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use float::{dct_n, dct_n_counted, dct_w, idct_n, idct_n_counted, idct_w};
pub use integer::{
    basis_matrix, int_dct_w, int_dct_window, int_idct_w, int_idct_window, COEFF_FRAC_BITS,
};

/// Count of arithmetic operations performed by a transform call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpCounter {
    pub multiplies: u64,
    pub adds: u64,
    pub shifts: u64,
}

impl AddAssign for OpCounter {
    fn add_assign(&mut self, rhs: OpCounter) {
        self.multiplies += rhs.multiplies;
        self.adds += rhs.adds;
        self.shifts += rhs.shifts;
    }
}

/// Supported transform window lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WindowSize {
    W8,
    W16,
}

impl WindowSize {
    pub fn get(self) -> usize {
        match self {
            WindowSize::W8 => 8,
            WindowSize::W16 => 16,
        }
    }

    pub fn log2(self) -> u32 {
        self.get().trailing_zeros()
    }

    /// Input scaling factor `S = 2^(6 + log2(N) / 2)` for the integer
    /// transform, rounded to the nearest integer (181 for 8, 256 for 16).
    pub fn scale(self) -> u32 {
        match self {
            WindowSize::W8 => 181,
            WindowSize::W16 => 256,
        }
    }
}

impl TryFrom<usize> for WindowSize {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        match n {
            8 => Ok(WindowSize::W8),
            16 => Ok(WindowSize::W16),
            other => Err(Error::invalid(format!(
                "window size must be 8 or 16, got {other}"
            ))),
        }
    }
}

impl fmt::Display for WindowSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformKind {
    DctN,
    DctW,
    IntDctW,
}

impl TransformKind {
    pub fn name(self) -> &'static str {
        match self {
            TransformKind::DctN => "dct-n",
            TransformKind::DctW => "dct-w",
            TransformKind::IntDctW => "int-dct-w",
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            TransformKind::DctN => 0,
            TransformKind::DctW => 1,
            TransformKind::IntDctW => 2,
        }
    }

    pub(crate) fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(TransformKind::DctN),
            1 => Some(TransformKind::DctW),
            2 => Some(TransformKind::IntDctW),
            _ => None,
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dct-n" => Ok(TransformKind::DctN),
            "dct-w" => Ok(TransformKind::DctW),
            "int-dct-w" => Ok(TransformKind::IntDctW),
            other => Err(Error::invalid(format!("unknown transform variant {other:?}"))),
        }
    }
}

/// A transform kind plus its window size. DCT-N transforms the whole
/// channel at once and carries no window size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TransformVariant {
    kind: TransformKind,
    window_size: Option<WindowSize>,
}

impl TransformVariant {
    pub fn dct_n() -> Self {
        TransformVariant {
            kind: TransformKind::DctN,
            window_size: None,
        }
    }

    pub fn dct_w(window_size: WindowSize) -> Self {
        TransformVariant {
            kind: TransformKind::DctW,
            window_size: Some(window_size),
        }
    }

    pub fn int_dct_w(window_size: WindowSize) -> Self {
        TransformVariant {
            kind: TransformKind::IntDctW,
            window_size: Some(window_size),
        }
    }

    /// Builds a variant from its kind and a window size, which is ignored for DCT-N.
    pub fn new(kind: TransformKind, window_size: WindowSize) -> Self {
        match kind {
            TransformKind::DctN => Self::dct_n(),
            TransformKind::DctW => Self::dct_w(window_size),
            TransformKind::IntDctW => Self::int_dct_w(window_size),
        }
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn window_size(&self) -> Option<WindowSize> {
        self.window_size
    }

    pub fn is_integer(&self) -> bool {
        self.kind == TransformKind::IntDctW
    }

    /// Scale applied to the input samples: `S` for the integer variant, 1 otherwise.
    pub fn scale(&self) -> u32 {
        match (self.kind, self.window_size) {
            (TransformKind::IntDctW, Some(ws)) => ws.scale(),
            _ => 1,
        }
    }
}

impl fmt::Display for TransformVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.window_size {
            Some(ws) => write!(f, "{}/{}", self.kind, ws),
            None => write!(f, "{}", self.kind),
        }
    }
}

/// One window of transform coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientWindow<T> {
    pub values: Vec<T>,
    /// Input scale `S` for integer windows, 1 for floating-point ones.
    pub scale: u32,
}

/// Number of windows needed to cover `len` samples.
pub fn window_count(len: usize, window_size: usize) -> usize {
    len.div_ceil(window_size)
}
