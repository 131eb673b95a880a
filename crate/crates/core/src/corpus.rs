//! Seeded synthetic pulse library for a ring of qubits.
//!
//! Each qubit gets X and SX DRAG pulses, one flat-top cross-resonance pulse
//! per neighbour and a flat-top readout pulse. Amplitudes, DRAG
//! coefficients, edge times and I/Q phases are drawn from a ChaCha
//! generator, so a seed fixes every sample.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::library::{LibraryMetadata, WaveformLibrary};
use crate::pulse::{gen_drag, gen_flat_top, rotate};
use crate::waveform::Waveform;

pub const DEFAULT_SEED: u64 = 2023;
const GENERATOR: &str = "cwm ring corpus v1";

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusParams {
    pub qubits: usize,
    pub seed: u64,
    pub sample_rate_hz: f64,
    pub single_qubit_seconds: f64,
    pub two_qubit_seconds: f64,
    pub readout_seconds: f64,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams {
            qubits: 16,
            seed: DEFAULT_SEED,
            sample_rate_hz: 4.54e9,
            single_qubit_seconds: 30e-9,
            two_qubit_seconds: 300e-9,
            readout_seconds: 300e-9,
        }
    }
}

/// Ring neighbours of qubit `q`, without duplicates.
fn neighbours(q: usize, n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for j in [(q + 1) % n, (q + n - 1) % n] {
        if j != q && !out.contains(&j) {
            out.push(j);
        }
    }
    out
}

fn flat_top(rng: &mut ChaCha20Rng, amp: (f64, f64), rise_ns: (f64, f64), total: f64, rate: f64) -> Result<Waveform> {
    let a = rng.random_range(amp.0..amp.1);
    let rise = rng.random_range(rise_ns.0..rise_ns.1) * 1e-9;
    let phase = rng.random_range(0.0..TAU);
    let flat = (total - 2.0 * rise).max(0.0);
    rotate(&gen_flat_top(a, rise, flat, rate)?, phase)
}

pub fn gen_corpus(p: &CorpusParams) -> Result<Vec<Waveform>> {
    if p.qubits == 0 {
        return Err(Error::invalid("corpus needs at least one qubit"));
    }
    let rate = p.sample_rate_hz;
    let mut rng = ChaCha20Rng::seed_from_u64(p.seed);
    let mut out = Vec::new();
    for q in 0..p.qubits {
        let amp = rng.random_range(0.10..0.25);
        let beta = rng.random_range(-1.5..1.5);
        let sigma = p.single_qubit_seconds / 4.0;
        let x = gen_drag(amp, sigma, beta, p.single_qubit_seconds, rate)?;
        let sx = gen_drag(amp / 2.0, sigma, beta, p.single_qubit_seconds, rate)?;
        out.push(x.with_label(format!("q{q}/x")));
        out.push(sx.with_label(format!("q{q}/sx")));
        for j in neighbours(q, p.qubits) {
            let cr = flat_top(&mut rng, (0.10, 0.35), (15.0, 30.0), p.two_qubit_seconds, rate)?;
            out.push(cr.with_label(format!("q{q}/cx_q{j}")));
        }
        let m = flat_top(&mut rng, (0.05, 0.30), (10.0, 25.0), p.readout_seconds, rate)?;
        out.push(m.with_label(format!("q{q}/measure")));
    }
    Ok(out)
}

/// Generates the corpus and wraps it in a library with its seed recorded.
pub fn gen_corpus_library(p: &CorpusParams) -> Result<WaveformLibrary> {
    let waveforms = gen_corpus(p)?;
    WaveformLibrary::from_waveforms(
        p.sample_rate_hz,
        &waveforms,
        Some(LibraryMetadata {
            generator: GENERATOR.into(),
            seed: p.seed,
            qubits: Some(p.qubits),
        }),
    )
}
