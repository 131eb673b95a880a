//! Pulse-shape generators for the synthetic waveform corpus.
//!
//! Gaussian edges are "lifted": the Gaussian is shifted so that it reaches
//! zero one sample beyond each end of the pulse and rescaled so the peak is
//! exactly the requested amplitude. This is the shape control stacks actually
//! play, and it keeps pulse edges continuous with the zero padding applied
//! by the windowed transforms.

use crate::error::{Error, Result};
use crate::waveform::Waveform;

fn sample_count(duration: f64, sample_rate: f64) -> Result<usize> {
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::invalid(format!("duration must be positive, got {duration}")));
    }
    if !(sample_rate.is_finite() && sample_rate > 0.0) {
        return Err(Error::invalid(format!(
            "sample rate must be positive, got {sample_rate}"
        )));
    }
    let n = (duration * sample_rate).round();
    if n < 1.0 {
        return Err(Error::invalid(format!(
            "duration {duration} s is shorter than one sample at {sample_rate} S/s"
        )));
    }
    Ok(n as usize)
}

fn check_amplitude(amplitude: f64) -> Result<()> {
    if amplitude > 0.0 && amplitude <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "amplitude must be in (0, 1], got {amplitude}"
        )))
    }
}

/// DRAG pulse: lifted Gaussian on I, `beta` times its derivative on Q.
///
/// `sigma` is in seconds. `beta` is dimensionless and multiplies the
/// derivative taken with respect to the sample index, the convention used by
/// pulse libraries that specify DRAG in units of the sample period. The
/// Gaussian is centred on sample `(n - 1) / 2`, so I is symmetric and Q is
/// antisymmetric. If the Q excursion pushes either channel past full scale
/// both channels are scaled down together.
pub fn gen_drag(
    amplitude: f64,
    sigma: f64,
    beta: f64,
    duration: f64,
    sample_rate: f64,
) -> Result<Waveform> {
    check_amplitude(amplitude)?;
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
    }
    if !beta.is_finite() {
        return Err(Error::invalid("beta must be finite"));
    }
    let n = sample_count(duration, sample_rate)?;
    let sigma_n = sigma * sample_rate;
    let center = (n as f64 - 1.0) / 2.0;
    let gauss = |x: f64| (-(x * x) / (2.0 * sigma_n * sigma_n)).exp();
    let edge = gauss(center + 1.0);
    let lift = 1.0 - edge;
    if lift < 1e-12 {
        return Err(Error::invalid(format!(
            "sigma {sigma} s is too wide for a {duration} s pulse"
        )));
    }

    let mut i = Vec::with_capacity(n);
    let mut q = Vec::with_capacity(n);
    for k in 0..n {
        let x = k as f64 - center;
        let g = gauss(x);
        i.push(amplitude * (g - edge) / lift);
        q.push(beta * amplitude * (-x / (sigma_n * sigma_n)) * g / lift);
    }
    Waveform::normalized("drag", i, q, sample_rate)
}

/// Gaussian pulse on I only; a DRAG pulse with `beta = 0`.
pub fn gen_gaussian(amplitude: f64, sigma: f64, duration: f64, sample_rate: f64) -> Result<Waveform> {
    Ok(gen_drag(amplitude, sigma, 0.0, duration, sample_rate)?.with_label("gaussian"))
}

/// Flat-top pulse: lifted-Gaussian rise, constant plateau, mirrored fall.
///
/// The total length is `round((2 * rise + flat) * rate)` samples and each
/// edge is `round(rise * rate)` samples long, so the plateau takes whatever
/// is left. The Gaussian edge has sigma equal to half the rise time. Every
/// plateau sample is exactly `amplitude`; edge samples stay strictly below it.
pub fn gen_flat_top(
    amplitude: f64,
    rise_seconds: f64,
    flat_seconds: f64,
    sample_rate: f64,
) -> Result<Waveform> {
    check_amplitude(amplitude)?;
    if !(flat_seconds.is_finite() && flat_seconds >= 0.0) {
        return Err(Error::invalid(format!(
            "flat time must be non-negative, got {flat_seconds}"
        )));
    }
    let total = sample_count(2.0 * rise_seconds + flat_seconds, sample_rate)?;
    let rise = sample_count(rise_seconds, sample_rate)?.min(total / 2);
    if rise == 0 {
        return Err(Error::invalid("rise time is shorter than one sample"));
    }
    let flat = total - 2 * rise;

    let edge = rise_edge(amplitude, rise);
    let mut i = Vec::with_capacity(total);
    i.extend_from_slice(&edge);
    i.extend(std::iter::repeat_n(amplitude, flat));
    i.extend(edge.iter().rev());
    let q = vec![0.0; total];
    Waveform::new("flat_top", i, q, sample_rate)
}

/// Rising edge of `len` samples that would reach `amplitude` at sample `len`.
fn rise_edge(amplitude: f64, len: usize) -> Vec<f64> {
    let sigma = len as f64 / 2.0;
    let gauss = |k: f64| {
        let x = k - len as f64;
        (-(x * x) / (2.0 * sigma * sigma)).exp()
    };
    let floor = gauss(-1.0);
    (0..len)
        .map(|k| amplitude * (gauss(k as f64) - floor) / (1.0 - floor))
        .collect()
}

/// Constant pulse with hard edges.
pub fn gen_constant(amplitude: f64, duration: f64, sample_rate: f64) -> Result<Waveform> {
    if !(amplitude.is_finite() && amplitude.abs() <= 1.0) {
        return Err(Error::invalid(format!(
            "amplitude must be within full scale, got {amplitude}"
        )));
    }
    let n = sample_count(duration, sample_rate)?;
    Waveform::new("constant", vec![amplitude; n], vec![0.0; n], sample_rate)
}

/// Rotates the I/Q pair by `phase` radians.
pub fn rotate(w: &Waveform, phase: f64) -> Result<Waveform> {
    let (s, c) = phase.sin_cos();
    let (i, q): (Vec<f64>, Vec<f64>) = w
        .i_samples()
        .iter()
        .zip(w.q_samples())
        .map(|(&x, &y)| (x * c - y * s, x * s + y * c))
        .unzip();
    Waveform::normalized(w.label().to_owned(), i, q, w.sample_rate_hz())
}
