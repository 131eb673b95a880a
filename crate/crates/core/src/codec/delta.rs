//! Delta-compression baseline: first sample verbatim, then differences.
//!
//! Differences are stored at half the sample width when every difference of
//! a channel fits and the channel never crosses zero; otherwise the channel
//! keeps full-width differences and gains nothing.

use crate::waveform::{BitWidth, QuantizedWaveform};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaChannel {
    pub first: i32,
    pub deltas: Vec<i32>,
    /// Stored bits per difference.
    pub delta_bits: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaStream {
    pub label: String,
    pub bit_width: BitWidth,
    pub scale: u32,
    pub i: DeltaChannel,
    pub q: DeltaChannel,
}

impl DeltaStream {
    pub fn stored_bits(&self) -> u64 {
        let bw = self.bit_width.bits() as u64;
        [&self.i, &self.q]
            .iter()
            .map(|c| bw + c.deltas.len() as u64 * c.delta_bits as u64)
            .sum()
    }

    /// Original bits over stored bits.
    pub fn ratio(&self) -> f64 {
        let samples = 2 * (self.i.deltas.len() as u64 + 1);
        (samples * self.bit_width.bits() as u64) as f64 / self.stored_bits() as f64
    }
}

/// True if the sign changes anywhere, looking through exact zeros.
fn crosses_zero(x: &[i32]) -> bool {
    let mut signs = x.iter().map(|v| v.signum()).filter(|&s| s != 0);
    match signs.next() {
        Some(first) => signs.any(|s| s != first),
        None => false,
    }
}

fn encode_channel(x: &[i32], bit_width: BitWidth) -> DeltaChannel {
    let deltas: Vec<i32> = x.windows(2).map(|p| p[1] - p[0]).collect();
    let half = bit_width.bits() / 2;
    let limit = 1i32 << (half - 1);
    let fits = deltas.iter().all(|&d| d >= -limit && d < limit);
    DeltaChannel {
        first: x.first().copied().unwrap_or(0),
        delta_bits: if fits && !crosses_zero(x) {
            half
        } else {
            bit_width.bits()
        },
        deltas,
    }
}

pub fn delta_compress(w: &QuantizedWaveform) -> DeltaStream {
    DeltaStream {
        label: w.label.clone(),
        bit_width: w.bit_width,
        scale: w.scale,
        i: encode_channel(&w.i_samples, w.bit_width),
        q: encode_channel(&w.q_samples, w.bit_width),
    }
}

fn decode_channel(c: &DeltaChannel) -> Vec<i32> {
    let mut out = Vec::with_capacity(c.deltas.len() + 1);
    let mut v = c.first;
    out.push(v);
    for d in &c.deltas {
        v += d;
        out.push(v);
    }
    out
}

pub fn delta_decompress(s: &DeltaStream) -> QuantizedWaveform {
    QuantizedWaveform {
        label: s.label.clone(),
        i_samples: decode_channel(&s.i),
        q_samples: decode_channel(&s.q),
        bit_width: s.bit_width,
        scale: s.scale,
    }
}
