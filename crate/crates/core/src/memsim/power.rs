//! Relative energy from memory and IDCT event counts.

use serde::{Deserialize, Serialize};

use super::MemoryMode;
use crate::codec::CompressedWaveform;
use crate::error::{Error, Result};

/// Event counts for playing one waveform. Memory accesses count fetched
/// I/Q slot pairs; for uncompressed storage a slot is one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessStats {
    pub memory_accesses: u64,
    pub idct_invocations: u64,
    pub mode: MemoryMode,
}

impl AccessStats {
    pub fn uncompressed(samples: usize) -> Self {
        AccessStats {
            memory_accesses: samples as u64,
            idct_invocations: 0,
            mode: MemoryMode::Uncompressed,
        }
    }

    /// Every window fetches `uniform_width` slots and runs the IDCT once.
    pub fn compressed(c: &CompressedWaveform) -> Self {
        let windows = c.window_count() as u64;
        AccessStats {
            memory_accesses: windows * c.uniform_width() as u64,
            idct_invocations: windows,
            mode: MemoryMode::Compressed,
        }
    }
}

/// Energy charged per event, in arbitrary units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyWeights {
    pub memory_access: f64,
    pub idct_invocation: f64,
}

impl Default for EnergyWeights {
    fn default() -> Self {
        EnergyWeights {
            memory_access: 1.0,
            idct_invocation: 1.0,
        }
    }
}

pub fn power_proxy(stats: &AccessStats, weights: &EnergyWeights) -> Result<f64> {
    if !(weights.memory_access >= 0.0 && weights.idct_invocation >= 0.0) {
        return Err(Error::invalid("energy weights must be non-negative"));
    }
    Ok(stats.memory_accesses as f64 * weights.memory_access
        + stats.idct_invocations as f64 * weights.idct_invocation)
}

/// `power_proxy(stats) / power_proxy(baseline)`.
pub fn relative_energy(
    stats: &AccessStats,
    baseline: &AccessStats,
    weights: &EnergyWeights,
) -> Result<f64> {
    let base = power_proxy(baseline, weights)?;
    if base == 0.0 {
        return Err(Error::invalid("baseline has zero energy"));
    }
    Ok(power_proxy(stats, weights)? / base)
}
