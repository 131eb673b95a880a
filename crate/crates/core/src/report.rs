//! Library-level compression report.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use serde::Serialize;

use crate::capacity::{capacity_breakdown, estimate_bandwidth, CapacityEstimate, ControlSystemParams};
use crate::codec::{decode_channels, CompressedWaveform};
use crate::error::{Error, Result};
use crate::format::effective_ratio;
use crate::memsim::samples_per_window_histogram;
use crate::waveform::{mse_channels, Waveform};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveformReport {
    pub label: String,
    pub samples: usize,
    pub windows: usize,
    pub uniform_width: usize,
    pub threshold: f64,
    pub ratio: f64,
    pub effective_ratio: f64,
    pub mse: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioSummary {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemSummary {
    pub name: String,
    pub capacity_bytes_per_qubit: f64,
    pub capacity_breakdown: CapacityEstimate,
    pub bandwidth_bytes_per_second: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LibraryReport {
    pub variant: String,
    pub waveforms: Vec<WaveformReport>,
    pub ratio: RatioSummary,
    pub effective_ratio: RatioSummary,
    pub max_mse: f64,
    /// Occupied slots per window, both channels, keyed by slot count.
    pub histogram: BTreeMap<usize, u64>,
    pub systems: Vec<SystemSummary>,
}

fn summary(values: impl Iterator<Item = f64> + Clone) -> RatioSummary {
    let n = values.clone().count().max(1) as f64;
    RatioSummary {
        min: values.clone().fold(f64::INFINITY, f64::min),
        mean: values.clone().sum::<f64>() / n,
        max: values.fold(f64::NEG_INFINITY, f64::max),
    }
}

fn system(name: &str, p: &ControlSystemParams) -> SystemSummary {
    let breakdown = capacity_breakdown(p);
    SystemSummary {
        name: name.into(),
        capacity_bytes_per_qubit: breakdown.total_bytes(),
        capacity_breakdown: breakdown,
        bandwidth_bytes_per_second: estimate_bandwidth(p.sampling_rate_sps, p.sample_size_bits),
    }
}

/// Compares every original waveform against its compressed entry of the
/// same label. The two sets of labels must match exactly.
pub fn build_report(originals: &[Waveform], compressed: &[CompressedWaveform]) -> Result<LibraryReport> {
    if compressed.is_empty() {
        return Err(Error::Validation("compressed library is empty".into()));
    }
    let by_label: HashMap<&str, &Waveform> = originals.iter().map(|w| (w.label(), w)).collect();
    if by_label.len() != compressed.len() {
        return Err(Error::Validation(format!(
            "{} original waveforms but {} compressed entries",
            originals.len(),
            compressed.len()
        )));
    }
    let mut waveforms = Vec::with_capacity(compressed.len());
    for c in compressed {
        let w = by_label.get(c.label()).ok_or_else(|| {
            Error::Validation(format!("compressed entry {:?} has no original", c.label()))
        })?;
        if w.len() != c.original_length() {
            return Err(Error::Validation(format!(
                "{:?} has {} samples but its compressed entry decodes to {}",
                c.label(),
                w.len(),
                c.original_length()
            )));
        }
        let [i, q] = decode_channels(c)?;
        waveforms.push(WaveformReport {
            label: c.label().to_owned(),
            samples: w.len(),
            windows: c.window_count(),
            uniform_width: c.uniform_width(),
            threshold: c.threshold_used(),
            ratio: c.compression_ratio(),
            effective_ratio: effective_ratio(c),
            mse: mse_channels([w.i_samples(), w.q_samples()], [&i, &q]),
        });
    }
    waveforms.sort_by(|a, b| a.label.cmp(&b.label));
    Ok(LibraryReport {
        variant: compressed[0].variant().to_string(),
        ratio: summary(waveforms.iter().map(|w| w.ratio)),
        effective_ratio: summary(waveforms.iter().map(|w| w.effective_ratio)),
        max_mse: waveforms.iter().map(|w| w.mse).fold(0.0, f64::max),
        histogram: samples_per_window_histogram(compressed)?,
        systems: vec![
            system("ibm", &ControlSystemParams::ibm()),
            system("google", &ControlSystemParams::google()),
        ],
        waveforms,
    })
}

impl LibraryReport {
    /// One CSV row per waveform.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.waveforms {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}
