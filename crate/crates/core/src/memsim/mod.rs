//! Banked waveform memory and decompression pipeline model.
//!
//! The fabric clock is slower than the DAC, so each fabric cycle must
//! supply `clock_ratio` samples. Uncompressed storage interleaves samples
//! across `ceil(clock_ratio)` banks. Compressed storage interleaves the
//! slots of a window across `uniform_width` banks per IDCT engine, and
//! `ceil(clock_ratio / window_size)` engines keep up with the DAC.

mod adaptive;
mod histogram;
mod power;
mod stream;

pub use adaptive::{adaptive_stream, decompress_adaptive, AdaptiveWaveform, Segment};
pub use histogram::samples_per_window_histogram;
pub use power::{power_proxy, relative_energy, AccessStats, EnergyWeights};
pub use stream::{simulate_stream, simulate_uncompressed, CycleRecord, StreamLayout, StreamTrace};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::WindowSize;

/// Timing and memory geometry of the playback pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub fabric_clock_hz: f64,
    pub dac_rate_sps: f64,
    pub window_size: WindowSize,
    pub idct_latency_cycles: u32,
    /// Memory banks available to one channel.
    pub banks_available: u64,
}

impl PipelineConfig {
    /// A pipeline whose DAC runs `clock_ratio` times faster than a 1 Hz
    /// fabric clock; only the ratio matters to the model.
    pub fn with_ratio(clock_ratio: f64, window_size: WindowSize) -> Self {
        PipelineConfig {
            fabric_clock_hz: 1.0,
            dac_rate_sps: clock_ratio,
            window_size,
            idct_latency_cycles: 1,
            banks_available: u64::MAX,
        }
    }

    pub fn clock_ratio(&self) -> f64 {
        self.dac_rate_sps / self.fabric_clock_hz
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fabric_clock_hz > 0.0 && self.fabric_clock_hz.is_finite()) {
            return Err(Error::invalid("fabric clock must be positive"));
        }
        if !(self.dac_rate_sps >= self.fabric_clock_hz && self.dac_rate_sps.is_finite()) {
            return Err(Error::invalid(format!(
                "DAC rate {} must be at least the fabric clock {}",
                self.dac_rate_sps, self.fabric_clock_hz
            )));
        }
        if self.idct_latency_cycles == 0 {
            return Err(Error::invalid("IDCT latency must be at least one cycle"));
        }
        Ok(())
    }

    /// Parallel IDCT engines needed to match the DAC.
    pub fn engines(&self) -> u64 {
        ceil_ratio(self.clock_ratio() / self.window_size.get() as f64)
    }
}

/// `ceil(x)` that ignores floating-point noise just above an integer.
fn ceil_ratio(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MemoryMode {
    Uncompressed,
    Compressed,
    Adaptive,
}

/// Bank allocation for one channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BankPlan {
    pub banks_per_channel: u64,
    pub mode: MemoryMode,
    /// Slots (samples or coefficients) fetched per fabric cycle.
    pub slots_per_fetch: u64,
    /// IDCT engines; zero when uncompressed.
    pub engines: u64,
}

impl BankPlan {
    /// Banks needed regardless of how many are available.
    pub fn required(cfg: &PipelineConfig, mode: MemoryMode, uniform_width: usize) -> Result<Self> {
        cfg.validate()?;
        Ok(match mode {
            MemoryMode::Uncompressed => {
                let banks = ceil_ratio(cfg.clock_ratio());
                BankPlan {
                    banks_per_channel: banks,
                    mode,
                    slots_per_fetch: banks,
                    engines: 0,
                }
            }
            MemoryMode::Compressed | MemoryMode::Adaptive => {
                if uniform_width == 0 || uniform_width > cfg.window_size.get() {
                    return Err(Error::invalid(format!(
                        "uniform width {uniform_width} outside 1..={}",
                        cfg.window_size
                    )));
                }
                let engines = cfg.engines();
                let banks = uniform_width as u64 * engines;
                BankPlan {
                    banks_per_channel: banks,
                    mode,
                    slots_per_fetch: banks,
                    engines,
                }
            }
        })
    }
}

/// Plans banks for a waveform stored uncompressed (`uniform_width = None`)
/// or compressed at `Some(width)`. Fails when the plan needs more banks
/// than `cfg.banks_available`.
pub fn plan_banks(uniform_width: Option<usize>, cfg: &PipelineConfig) -> Result<BankPlan> {
    let plan = match uniform_width {
        None => BankPlan::required(cfg, MemoryMode::Uncompressed, 0)?,
        Some(w) => BankPlan::required(cfg, MemoryMode::Compressed, w)?,
    };
    if plan.banks_per_channel > cfg.banks_available {
        return Err(Error::Capacity {
            needed: plan.banks_per_channel,
            available: cfg.banks_available,
        });
    }
    Ok(plan)
}

/// Qubits served by a fixed bank budget with compression, relative to
/// without: uncompressed banks over compressed banks, as an exact ratio.
pub fn qubit_capacity_gain(cfg: &PipelineConfig, uniform_width: usize) -> Result<Ratio<u64>> {
    let u = BankPlan::required(cfg, MemoryMode::Uncompressed, 0)?;
    let c = BankPlan::required(cfg, MemoryMode::Compressed, uniform_width)?;
    Ok(Ratio::new(u.banks_per_channel, c.banks_per_channel))
}
