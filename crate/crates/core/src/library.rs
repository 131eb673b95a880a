//! JSON waveform library files.
//!
//! ```json
//! {"format_version": 1, "sample_rate_hz": 4.54e9,
//!  "entries": [{"label": "q0/x", "i": [...], "q": [...]}],
//!  "metadata": {"generator": "...", "seed": 7}}
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::waveform::Waveform;

pub const LIBRARY_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LibraryEntry {
    pub label: String,
    pub i: Vec<f64>,
    pub q: Vec<f64>,
}

/// Provenance of a generated library.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LibraryMetadata {
    pub generator: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubits: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveformLibrary {
    pub format_version: u32,
    pub sample_rate_hz: f64,
    pub entries: Vec<LibraryEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<LibraryMetadata>,
}

impl WaveformLibrary {
    /// Builds a library; every waveform must share `sample_rate_hz`.
    pub fn from_waveforms(
        sample_rate_hz: f64,
        waveforms: &[Waveform],
        metadata: Option<LibraryMetadata>,
    ) -> Result<Self> {
        if let Some(w) = waveforms.iter().find(|w| w.sample_rate_hz() != sample_rate_hz) {
            return Err(Error::invalid(format!(
                "{:?} is sampled at {} S/s, not {sample_rate_hz}",
                w.label(),
                w.sample_rate_hz()
            )));
        }
        Ok(WaveformLibrary {
            format_version: LIBRARY_FORMAT_VERSION,
            sample_rate_hz,
            entries: waveforms
                .iter()
                .map(|w| LibraryEntry {
                    label: w.label().to_owned(),
                    i: w.i_samples().to_vec(),
                    q: w.q_samples().to_vec(),
                })
                .collect(),
            metadata,
        })
    }

    /// Validates every entry and returns the waveforms in file order.
    pub fn waveforms(&self) -> Result<Vec<Waveform>> {
        if self.format_version != LIBRARY_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported library version {}",
                self.format_version
            )));
        }
        let mut seen = std::collections::HashSet::new();
        self.entries
            .iter()
            .map(|e| {
                if !seen.insert(e.label.as_str()) {
                    return Err(Error::Validation(format!("duplicate label {:?}", e.label)));
                }
                Waveform::new(e.label.clone(), e.i.clone(), e.q.clone(), self.sample_rate_hz)
                    .map_err(|err| Error::Validation(format!("entry {:?}: {err}", e.label)))
            })
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }
}
