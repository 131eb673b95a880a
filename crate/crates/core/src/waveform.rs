//! Waveform data types, fixed-point quantization and error metrics.
//!
//! A [`Waveform`] is the sampled I/Q envelope of a gate pulse in DAC
//! full-scale units: every amplitude is finite and lies in `[-1, 1]`.

use crate::error::{Error, Result};

/// One of the two quadrature channels of a waveform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    I,
    Q,
}

impl Channel {
    pub const BOTH: [Channel; 2] = [Channel::I, Channel::Q];
}

/// A gate pulse envelope as paired I/Q sample sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    label: String,
    sample_rate_hz: f64,
    i_samples: Vec<f64>,
    q_samples: Vec<f64>,
}

impl Waveform {
    /// Builds a waveform, rejecting anything outside full scale.
    pub fn new(
        label: impl Into<String>,
        i_samples: Vec<f64>,
        q_samples: Vec<f64>,
        sample_rate_hz: f64,
    ) -> Result<Self> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::invalid(format!(
                "sample rate must be positive, got {sample_rate_hz}"
            )));
        }
        if i_samples.is_empty() {
            return Err(Error::invalid("waveform needs at least one sample"));
        }
        if i_samples.len() != q_samples.len() {
            return Err(Error::Shape {
                expected: i_samples.len(),
                actual: q_samples.len(),
            });
        }
        for (index, &s) in i_samples.iter().chain(&q_samples).enumerate() {
            if !s.is_finite() || s.abs() > 1.0 {
                return Err(Error::invalid(format!(
                    "sample {index} = {s} is outside full scale [-1, 1]"
                )));
            }
        }
        Ok(Waveform {
            label: label.into(),
            sample_rate_hz,
            i_samples,
            q_samples,
        })
    }

    /// Builds a waveform from raw amplitudes, dividing both channels by the
    /// joint peak when it exceeds full scale. Amplitudes already within
    /// `[-1, 1]` are kept as they are.
    pub fn normalized(
        label: impl Into<String>,
        mut i_samples: Vec<f64>,
        mut q_samples: Vec<f64>,
        sample_rate_hz: f64,
    ) -> Result<Self> {
        if i_samples.iter().chain(&q_samples).any(|s| !s.is_finite()) {
            return Err(Error::invalid("waveform contains non-finite samples"));
        }
        let peak = peak_abs(i_samples.iter().chain(&q_samples).copied());
        if peak > 1.0 {
            for s in i_samples.iter_mut().chain(q_samples.iter_mut()) {
                *s /= peak;
            }
        }
        Waveform::new(label, i_samples, q_samples, sample_rate_hz)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.i_samples.len()
    }

    /// Always false; a waveform holds at least one sample.
    pub fn is_empty(&self) -> bool {
        self.i_samples.is_empty()
    }

    pub fn i_samples(&self) -> &[f64] {
        &self.i_samples
    }

    pub fn q_samples(&self) -> &[f64] {
        &self.q_samples
    }

    pub fn channel(&self, channel: Channel) -> &[f64] {
        match channel {
            Channel::I => &self.i_samples,
            Channel::Q => &self.q_samples,
        }
    }

    pub fn duration_seconds(&self) -> f64 {
        self.len() as f64 / self.sample_rate_hz
    }

    /// Largest absolute amplitude over both channels.
    pub fn peak(&self) -> f64 {
        peak_abs(self.i_samples.iter().chain(&self.q_samples).copied())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

fn peak_abs(samples: impl Iterator<Item = f64>) -> f64 {
    samples.fold(0.0, |m, s| m.max(s.abs()))
}

/// Supported fixed-point sample widths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BitWidth {
    B12,
    B14,
    B16,
}

impl BitWidth {
    pub fn bits(self) -> u32 {
        match self {
            BitWidth::B12 => 12,
            BitWidth::B14 => 14,
            BitWidth::B16 => 16,
        }
    }

    pub fn max_value(self) -> i32 {
        (1 << (self.bits() - 1)) - 1
    }

    pub fn min_value(self) -> i32 {
        -(1 << (self.bits() - 1))
    }

    pub fn contains(self, v: i64) -> bool {
        v >= self.min_value() as i64 && v <= self.max_value() as i64
    }
}

impl TryFrom<u32> for BitWidth {
    type Error = Error;

    fn try_from(bits: u32) -> Result<Self> {
        match bits {
            12 => Ok(BitWidth::B12),
            14 => Ok(BitWidth::B14),
            16 => Ok(BitWidth::B16),
            other => Err(Error::invalid(format!(
                "bit width must be 12, 14 or 16, got {other}"
            ))),
        }
    }
}

/// Fixed-point image of a [`Waveform`]: `round(sample * scale)` per sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizedWaveform {
    pub label: String,
    pub i_samples: Vec<i32>,
    pub q_samples: Vec<i32>,
    pub bit_width: BitWidth,
    pub scale: u32,
}

impl QuantizedWaveform {
    pub fn len(&self) -> usize {
        self.i_samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.i_samples.is_empty()
    }

    pub fn channel(&self, channel: Channel) -> &[i32] {
        match channel {
            Channel::I => &self.i_samples,
            Channel::Q => &self.q_samples,
        }
    }

    /// Divides every sample by the scale, returning `(i, q)` in full-scale units.
    pub fn dequantize(&self) -> (Vec<f64>, Vec<f64>) {
        let s = self.scale as f64;
        let conv = |v: &[i32]| v.iter().map(|&x| x as f64 / s).collect();
        (conv(&self.i_samples), conv(&self.q_samples))
    }

    pub fn to_waveform(&self, sample_rate_hz: f64) -> Result<Waveform> {
        let (i, q) = self.dequantize();
        Waveform::normalized(self.label.clone(), i, q, sample_rate_hz)
    }
}

/// Rounds `sample * scale` half away from zero for every sample.
///
/// Fails with [`Error::Range`] naming the first sample (counting the I
/// channel first, then Q) whose scaled value does not fit `bit_width`.
pub fn quantize(w: &Waveform, bit_width: BitWidth, scale: u32) -> Result<QuantizedWaveform> {
    if scale == 0 {
        return Err(Error::invalid("quantization scale must be positive"));
    }
    let s = scale as f64;
    let mut index = 0usize;
    let mut conv = |samples: &[f64]| -> Result<Vec<i32>> {
        samples
            .iter()
            .map(|&x| {
                // f64::round is half-away-from-zero.
                let v = (x * s).round() as i64;
                let at = index;
                index += 1;
                if bit_width.contains(v) {
                    Ok(v as i32)
                } else {
                    Err(Error::Range {
                        index: at,
                        value: v,
                        bits: bit_width.bits(),
                    })
                }
            })
            .collect()
    };
    let i_samples = conv(w.i_samples())?;
    let q_samples = conv(w.q_samples())?;
    Ok(QuantizedWaveform {
        label: w.label().to_owned(),
        i_samples,
        q_samples,
        bit_width,
        scale,
    })
}

/// Mean squared error over both channels.
pub fn mse(a: &Waveform, b: &Waveform) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Shape {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(mse_channels(
        [a.i_samples(), a.q_samples()],
        [b.i_samples(), b.q_samples()],
    ))
}

pub(crate) fn mse_channels(a: [&[f64]; 2], b: [&[f64]; 2]) -> f64 {
    let n = a[0].len();
    let sum: f64 = (0..2)
        .map(|c| {
            a[c].iter()
                .zip(b[c])
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
        })
        .sum();
    sum / (2 * n) as f64
}
