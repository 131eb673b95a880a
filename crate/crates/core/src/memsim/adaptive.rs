//! Adaptive decompression: constant stretches of a pulse bypass memory and
//! the IDCT.
//!
//! A window whose I and Q channels both keep at most the DC coefficient
//! decodes to a constant. Two or more consecutive such windows with the
//! same decoded I/Q value form a plateau, served from a single codeword
//! fetch by repeating that value.

use super::stream::{simulate_units, StreamTrace, Unit};
use super::{AccessStats, BankPlan, MemoryMode, PipelineConfig};
use crate::codec::{decode_window_samples, ChannelWindows, CompressedWaveform};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    /// A stored window decoded through the IDCT.
    Window(usize),
    /// `windows` consecutive constant windows starting at `first`.
    Plateau {
        first: usize,
        windows: usize,
        i_value: f64,
        q_value: f64,
    },
}

/// A compressed waveform re-segmented for adaptive playback.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveWaveform {
    compressed: CompressedWaveform,
    segments: Vec<Segment>,
}

fn dc_only(c: &CompressedWaveform, index: usize) -> bool {
    match c.windows() {
        ChannelWindows::Int(ch) => ch.iter().all(|w| w[index].coefficients.len() <= 1),
        ChannelWindows::Float(ch) => ch.iter().all(|w| w[index].coefficients.len() <= 1),
    }
}

impl AdaptiveWaveform {
    pub fn new(c: &CompressedWaveform) -> Result<Self> {
        if c.variant().window_size().is_none() {
            return Err(Error::invalid("adaptive playback needs a windowed variant"));
        }
        let mut constant = Vec::with_capacity(c.window_count());
        for index in 0..c.window_count() {
            constant.push(if dc_only(c, index) {
                let i = decode_window_samples(c, 0, index)?[0];
                let q = decode_window_samples(c, 1, index)?[0];
                Some((i.to_bits(), q.to_bits()))
            } else {
                None
            });
        }

        let mut segments = Vec::new();
        let mut index = 0;
        while index < constant.len() {
            let run = match constant[index] {
                Some(v) => constant[index..]
                    .iter()
                    .take_while(|&&c| c == Some(v))
                    .count(),
                None => 1,
            };
            if run >= 2 {
                let (i, q) = constant[index].expect("run of constant windows");
                segments.push(Segment::Plateau {
                    first: index,
                    windows: run,
                    i_value: f64::from_bits(i),
                    q_value: f64::from_bits(q),
                });
                index += run;
            } else {
                segments.push(Segment::Window(index));
                index += 1;
            }
        }
        Ok(AdaptiveWaveform {
            compressed: c.clone(),
            segments,
        })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn compressed(&self) -> &CompressedWaveform {
        &self.compressed
    }

    /// Windows served by plateau bypass.
    pub fn plateau_windows(&self) -> usize {
        self.segments
            .iter()
            .map(|s| match s {
                Segment::Plateau { windows, .. } => *windows,
                Segment::Window(_) => 0,
            })
            .sum()
    }

    /// Slot fetches and IDCT runs needed to play the waveform once.
    pub fn access_stats(&self) -> AccessStats {
        let width = self.compressed.uniform_width() as u64;
        let (mut accesses, mut idct) = (0, 0);
        for s in &self.segments {
            match s {
                Segment::Window(_) => {
                    accesses += width;
                    idct += 1;
                }
                Segment::Plateau { .. } => accesses += 1,
            }
        }
        AccessStats {
            memory_accesses: accesses,
            idct_invocations: idct,
            mode: MemoryMode::Adaptive,
        }
    }

    fn units(&self) -> Vec<Unit> {
        let ws = self.compressed.window_size();
        self.segments
            .iter()
            .map(|s| match s {
                Segment::Window(_) => Unit::Window,
                Segment::Plateau { windows, .. } => Unit::Plateau(windows * ws),
            })
            .collect()
    }
}

/// Decodes through the adaptive path; identical to
/// [`crate::codec::decode_channels`] sample for sample.
pub fn decompress_adaptive(a: &AdaptiveWaveform) -> Result<[Vec<f64>; 2]> {
    let c = &a.compressed;
    let ws = c.window_size();
    let mut out = [Vec::new(), Vec::new()];
    for s in &a.segments {
        match s {
            Segment::Window(index) => {
                for (channel, samples) in out.iter_mut().enumerate() {
                    samples.extend(decode_window_samples(c, channel, *index)?);
                }
            }
            Segment::Plateau {
                windows,
                i_value,
                q_value,
                ..
            } => {
                out[0].extend(std::iter::repeat_n(*i_value, windows * ws));
                out[1].extend(std::iter::repeat_n(*q_value, windows * ws));
            }
        }
    }
    for samples in &mut out {
        samples.truncate(c.original_length());
    }
    Ok(out)
}

/// Plays `c` with plateau bypass and reports the trace and access counts.
pub fn adaptive_stream(
    c: &CompressedWaveform,
    cfg: &PipelineConfig,
) -> Result<(StreamTrace, AccessStats)> {
    let a = AdaptiveWaveform::new(c)?;
    if Some(cfg.window_size) != c.variant().window_size() {
        return Err(Error::invalid(format!(
            "stream uses {}-sample windows but the pipeline is configured for {}",
            c.window_size(),
            cfg.window_size
        )));
    }
    let plan = BankPlan::required(cfg, MemoryMode::Adaptive, c.uniform_width())?;
    let trace = simulate_units(&a.units(), c.window_size(), c.uniform_width(), cfg, &plan)?;
    let stats = a.access_stats();
    debug_assert_eq!(stats.memory_accesses, trace.memory_accesses);
    debug_assert_eq!(stats.idct_invocations, trace.idct_invocations);
    Ok((trace, stats))
}
