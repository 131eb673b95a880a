//! Waveform codec: transform, threshold, trailing-zero RLE and fixed-width
//! window packing, plus the fidelity-driven threshold search and the delta
//! baseline.

mod delta;
mod fidelity;
mod rle;

pub use delta::{delta_compress, delta_decompress, DeltaChannel, DeltaStream};
pub use fidelity::{fidelity_aware_compress, FidelitySearch, SearchStep, MIN_THRESHOLD};
pub use rle::{
    clamp_coefficient, rle_decode, rle_encode, threshold, Coefficient, CompressedWindow,
    RleCodeword, Slot,
};

use crate::error::{Error, Result};
use crate::transform::{
    dct_n, dct_w, idct_n, int_dct_w, int_idct_window, window_count, OpCounter, TransformKind,
    TransformVariant, WindowSize,
};
use crate::waveform::{mse_channels, quantize, BitWidth, Channel, Waveform};
use rle::{decode_window, threshold_values};

/// Codec settings for a single compression run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodecConfig {
    pub variant: TransformVariant,
    /// Coefficients with a smaller magnitude (orthonormal units) are dropped.
    pub threshold: f64,
    /// Sample width of the quantized input to the integer transform.
    pub bit_width: BitWidth,
}

impl CodecConfig {
    pub fn new(variant: TransformVariant) -> Self {
        CodecConfig {
            variant,
            threshold: 0.0,
            bit_width: BitWidth::B16,
        }
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }
}

/// Compressed windows of both channels, integer or floating point.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelWindows {
    Int([Vec<CompressedWindow<i16>>; 2]),
    Float([Vec<CompressedWindow<f64>>; 2]),
}

impl ChannelWindows {
    fn len(&self) -> usize {
        match self {
            ChannelWindows::Int(c) => c[0].len(),
            ChannelWindows::Float(c) => c[0].len(),
        }
    }

    fn occupied(&self, channel: usize) -> Vec<usize> {
        match self {
            ChannelWindows::Int(c) => c[channel].iter().map(|w| w.occupied_slots()).collect(),
            ChannelWindows::Float(c) => c[channel].iter().map(|w| w.occupied_slots()).collect(),
        }
    }
}

/// A compressed waveform: per-channel windows plus the metadata needed to
/// decode them.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedWaveform {
    label: String,
    variant: TransformVariant,
    window_size: usize,
    scale: u32,
    original_length: usize,
    uniform_width: usize,
    threshold_used: f64,
    windows: ChannelWindows,
}

impl CompressedWaveform {
    /// Assembles a compressed waveform from decoded parts, checking that the
    /// windows are consistent with the metadata.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        label: String,
        variant: TransformVariant,
        window_size: usize,
        original_length: usize,
        uniform_width: usize,
        threshold_used: f64,
        windows: ChannelWindows,
    ) -> Result<Self> {
        if original_length == 0 {
            return Err(Error::Format("original length must be positive".into()));
        }
        let expected_ws = variant.window_size().map_or(original_length, WindowSize::get);
        if window_size != expected_ws {
            return Err(Error::Format(format!(
                "window size {window_size} does not match variant {variant}"
            )));
        }
        match (&windows, variant.is_integer()) {
            (ChannelWindows::Int(_), true) | (ChannelWindows::Float(_), false) => {}
            _ => {
                return Err(Error::Format(format!(
                    "coefficient type does not match variant {variant}"
                )))
            }
        }
        let count = window_count(original_length, window_size);
        let (i_len, q_len) = match &windows {
            ChannelWindows::Int(c) => (c[0].len(), c[1].len()),
            ChannelWindows::Float(c) => (c[0].len(), c[1].len()),
        };
        if i_len != count || q_len != count {
            return Err(Error::Format(format!(
                "expected {count} windows per channel, got {i_len} and {q_len}"
            )));
        }
        if uniform_width == 0 || uniform_width > window_size {
            return Err(Error::Format(format!(
                "uniform width {uniform_width} outside 1..={window_size}"
            )));
        }
        for channel in 0..2 {
            for (w, slots) in windows.occupied(channel).into_iter().enumerate() {
                if slots > uniform_width {
                    return Err(Error::corrupt(
                        w,
                        format!("{slots} occupied slots exceed uniform width {uniform_width}"),
                    ));
                }
            }
        }
        Ok(CompressedWaveform {
            label,
            scale: variant.scale(),
            variant,
            window_size,
            original_length,
            uniform_width,
            threshold_used,
            windows,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn variant(&self) -> TransformVariant {
        self.variant
    }

    /// Samples per window; the whole channel for DCT-N.
    pub fn window_size(&self) -> usize {
        self.window_size
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn original_length(&self) -> usize {
        self.original_length
    }

    /// Slots reserved per window and channel: the largest occupied count.
    pub fn uniform_width(&self) -> usize {
        self.uniform_width
    }

    pub fn threshold_used(&self) -> f64 {
        self.threshold_used
    }

    pub fn windows(&self) -> &ChannelWindows {
        &self.windows
    }

    pub fn window_count(&self) -> usize {
        self.windows.len()
    }

    /// Occupied slots per window before padding to the uniform width.
    pub fn occupied_slots(&self, channel: Channel) -> Vec<usize> {
        self.windows.occupied(channel_index(channel))
    }

    /// Samples divided by stored slots, header excluded.
    pub fn compression_ratio(&self) -> f64 {
        compression_ratio(self.original_length, self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

fn channel_index(channel: Channel) -> usize {
    match channel {
        Channel::I => 0,
        Channel::Q => 1,
    }
}

/// `R = original samples / (windows * uniform width)`, counted per channel.
/// Header bytes are excluded; see [`crate::format::effective_ratio`] for the
/// figure that includes them.
pub fn compression_ratio(original_length: usize, c: &CompressedWaveform) -> f64 {
    original_length as f64 / (c.window_count() * c.uniform_width()) as f64
}

enum Spectrum {
    Int([Vec<Vec<i32>>; 2]),
    Float([Vec<Vec<f64>>; 2]),
}

/// Holds the forward transform of one waveform so it can be thresholded
/// and decoded repeatedly at different thresholds.
pub struct Encoder {
    label: String,
    variant: TransformVariant,
    window_size: usize,
    original: [Vec<f64>; 2],
    spectrum: Spectrum,
    ops: OpCounter,
}

impl Encoder {
    pub fn new(w: &Waveform, variant: TransformVariant, bit_width: BitWidth) -> Result<Self> {
        let original = [w.i_samples().to_vec(), w.q_samples().to_vec()];
        let mut ops = OpCounter::default();
        let (spectrum, window_size) = match (variant.kind(), variant.window_size()) {
            (TransformKind::IntDctW, Some(ws)) => {
                let q = quantize(w, bit_width, ws.scale())?;
                let (i, i_ops) = int_dct_w(&q.i_samples, ws)?;
                let (qq, q_ops) = int_dct_w(&q.q_samples, ws)?;
                ops += i_ops;
                ops += q_ops;
                let unwrap = |v: Vec<crate::transform::CoefficientWindow<i32>>| {
                    v.into_iter().map(|c| c.values).collect()
                };
                (Spectrum::Int([unwrap(i), unwrap(qq)]), ws.get())
            }
            (TransformKind::DctW, Some(ws)) => {
                let t = |x: &[f64]| dct_w(x, ws).into_iter().map(|c| c.values).collect();
                (
                    Spectrum::Float([t(w.i_samples()), t(w.q_samples())]),
                    ws.get(),
                )
            }
            _ => (
                Spectrum::Float([vec![dct_n(w.i_samples())?], vec![dct_n(w.q_samples())?]]),
                w.len(),
            ),
        };
        Ok(Encoder {
            label: w.label().to_owned(),
            variant,
            window_size,
            original,
            spectrum,
            ops,
        })
    }

    /// Largest coefficient magnitude over both channels, in orthonormal units.
    pub fn max_magnitude(&self) -> f64 {
        fn max<T: Coefficient>(c: &[Vec<Vec<T>>; 2]) -> f64 {
            c.iter()
                .flatten()
                .flatten()
                .fold(0.0, |m, v| m.max(v.magnitude()))
        }
        match &self.spectrum {
            Spectrum::Int(c) => max(c),
            Spectrum::Float(c) => max(c),
        }
    }

    /// Operations spent by the forward integer transform.
    pub fn forward_ops(&self) -> OpCounter {
        self.ops
    }

    pub fn encode(&self, t: f64) -> Result<CompressedWaveform> {
        if !(t >= 0.0) {
            return Err(Error::invalid(format!("threshold must be non-negative, got {t}")));
        }
        let windows = match &self.spectrum {
            Spectrum::Int(c) => ChannelWindows::Int(c.each_ref().map(|ch| {
                ch.iter()
                    .map(|v| {
                        let kept: Vec<i16> = threshold_values(v, t)
                            .into_iter()
                            .map(clamp_coefficient)
                            .collect();
                        rle_encode(&kept)
                    })
                    .collect()
            })),
            Spectrum::Float(c) => ChannelWindows::Float(c.each_ref().map(|ch| {
                ch.iter()
                    .map(|v| rle_encode(&threshold_values(v, t)))
                    .collect()
            })),
        };
        let uniform_width = (0..2)
            .flat_map(|ch| windows.occupied(ch))
            .max()
            .unwrap_or(1);
        Ok(CompressedWaveform {
            label: self.label.clone(),
            variant: self.variant,
            window_size: self.window_size,
            scale: self.variant.scale(),
            original_length: self.original[0].len(),
            uniform_width,
            threshold_used: t,
            windows,
        })
    }

    /// Mean squared error of `c` against the waveform this encoder was built from.
    pub fn mse_of(&self, c: &CompressedWaveform) -> Result<f64> {
        let [i, q] = decode_channels(c)?;
        Ok(mse_channels(
            [&self.original[0], &self.original[1]],
            [&i, &q],
        ))
    }
}

/// Quantize (integer variant), transform, threshold and RLE both channels.
pub fn compress(w: &Waveform, cfg: &CodecConfig) -> Result<CompressedWaveform> {
    Encoder::new(w, cfg.variant, cfg.bit_width)?.encode(cfg.threshold)
}

/// Decodes both channels to normalized amplitudes. Reconstructed samples
/// are clamped to full scale, as a DAC would saturate.
pub fn decode_channels(c: &CompressedWaveform) -> Result<[Vec<f64>; 2]> {
    let mut out = [
        Vec::with_capacity(c.window_count() * c.window_size),
        Vec::with_capacity(c.window_count() * c.window_size),
    ];
    for (channel, samples) in out.iter_mut().enumerate() {
        for index in 0..c.window_count() {
            samples.extend(decode_window_samples(c, channel, index)?);
        }
        samples.truncate(c.original_length);
    }
    Ok(out)
}

/// Decodes window `index` of `channel` (0 for I, 1 for Q), padding included.
pub(crate) fn decode_window_samples(
    c: &CompressedWaveform,
    channel: usize,
    index: usize,
) -> Result<Vec<f64>> {
    let ws = c.window_size;
    match &c.windows {
        ChannelWindows::Int(ch) => {
            let s = c.scale as i32;
            let y: Vec<i32> = decode_window(&ch[channel][index], ws, index)?
                .into_iter()
                .map(i32::from)
                .collect();
            let x = int_idct_window(&y, &mut OpCounter::default())
                .map_err(|e| Error::corrupt(index, e.to_string()))?;
            Ok(x.into_iter().map(|v| v.clamp(-s, s) as f64 / s as f64).collect())
        }
        ChannelWindows::Float(ch) => {
            let x = idct_n(&decode_window(&ch[channel][index], ws, index)?)?;
            Ok(x.into_iter().map(|v| v.clamp(-1.0, 1.0)).collect())
        }
    }
}

/// Decodes `c` into a waveform at `sample_rate_hz`.
pub fn decompress(c: &CompressedWaveform, sample_rate_hz: f64) -> Result<Waveform> {
    let [i, q] = decode_channels(c)?;
    Waveform::new(c.label.clone(), i, q, sample_rate_hz)
}
