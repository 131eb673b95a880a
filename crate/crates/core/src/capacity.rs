//! Per-qubit waveform memory capacity and bandwidth estimates.
//!
//! One stored gate waveform costs `rate * sample_size * latency` bytes. A
//! qubit stores every single-qubit gate once, every two-qubit gate once per
//! neighbour, and one readout pulse.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A gate family and the duration of its pulse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub name: String,
    pub latency_seconds: f64,
}

impl Gate {
    pub fn new(name: impl Into<String>, latency_seconds: f64) -> Self {
        Gate {
            name: name.into(),
            latency_seconds,
        }
    }
}

/// Control-stack parameters that determine per-qubit memory demand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlSystemParams {
    pub sampling_rate_sps: f64,
    /// Bits per sample, I and Q together.
    pub sample_size_bits: u32,
    pub single_qubit_gates: Vec<Gate>,
    pub two_qubit_gates: Vec<Gate>,
    pub readout_latency_seconds: f64,
    /// Average number of coupled neighbours per qubit.
    pub connectivity_degree: f64,
}

impl ControlSystemParams {
    /// Superconducting stack with fixed-frequency qubits on a heavy-hex
    /// lattice: X and SX at 30 ns, CX at 300 ns, 300 ns readout, 4.54 GS/s
    /// with 32-bit I/Q samples. Heavy-hex devices average about two
    /// couplers per qubit, so `d = 2`.
    pub fn ibm() -> Self {
        ControlSystemParams {
            sampling_rate_sps: 4.54e9,
            sample_size_bits: 32,
            single_qubit_gates: vec![Gate::new("x", 30e-9), Gate::new("sx", 30e-9)],
            two_qubit_gates: vec![Gate::new("cx", 300e-9)],
            readout_latency_seconds: 300e-9,
            connectivity_degree: 2.0,
        }
    }

    /// Tunable-qubit grid stack: phased-XZ at 25 ns, fSim and iSWAP at
    /// 30 ns, 500 ns readout, 1 GS/s with 28-bit I/Q samples, `d = 4`.
    pub fn google() -> Self {
        ControlSystemParams {
            sampling_rate_sps: 1e9,
            sample_size_bits: 28,
            single_qubit_gates: vec![Gate::new("phased_xz", 25e-9)],
            two_qubit_gates: vec![Gate::new("fsim", 30e-9), Gate::new("iswap", 30e-9)],
            readout_latency_seconds: 500e-9,
            connectivity_degree: 4.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sampling_rate_sps > 0.0) {
            return Err(Error::invalid("sampling rate must be positive"));
        }
        let latencies = self
            .single_qubit_gates
            .iter()
            .chain(&self.two_qubit_gates)
            .map(|g| g.latency_seconds);
        for t in latencies {
            if !(t > 0.0) {
                return Err(Error::invalid(format!("gate latency must be positive, got {t}")));
            }
        }
        if !(self.readout_latency_seconds >= 0.0 && self.connectivity_degree >= 0.0) {
            return Err(Error::invalid(
                "readout latency and connectivity degree must be non-negative",
            ));
        }
        Ok(())
    }

    fn bytes_per_second(&self) -> f64 {
        self.sampling_rate_sps * self.sample_size_bits as f64 / 8.0
    }
}

/// Breakdown of [`estimate_capacity`] by waveform class, in bytes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    pub single_qubit_bytes: f64,
    pub two_qubit_bytes: f64,
    pub readout_bytes: f64,
}

impl CapacityEstimate {
    pub fn total_bytes(&self) -> f64 {
        self.single_qubit_bytes + self.two_qubit_bytes + self.readout_bytes
    }
}

/// Waveform memory needed per qubit, in bytes.
pub fn estimate_capacity(p: &ControlSystemParams) -> f64 {
    capacity_breakdown(p).total_bytes()
}

pub fn capacity_breakdown(p: &ControlSystemParams) -> CapacityEstimate {
    let per_second = p.bytes_per_second();
    let sum = |gates: &[Gate]| gates.iter().map(|g| per_second * g.latency_seconds).sum::<f64>();
    CapacityEstimate {
        single_qubit_bytes: sum(&p.single_qubit_gates),
        two_qubit_bytes: p.connectivity_degree * sum(&p.two_qubit_gates),
        readout_bytes: per_second * p.readout_latency_seconds,
    }
}

/// Streaming bandwidth in bytes per second for one DAC channel pair.
pub fn estimate_bandwidth(sampling_rate_sps: f64, sample_size_bits: u32) -> f64 {
    sampling_rate_sps * sample_size_bits as f64 / 8.0
}
