use super::{CodecConfig, CompressedWaveform, Encoder};
use crate::error::{Error, Result};
use crate::waveform::Waveform;

/// The search gives up once the threshold halves below this value.
pub const MIN_THRESHOLD: f64 = 1e-6;

/// One compress/decompress round of the threshold search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchStep {
    pub threshold: f64,
    pub mse: f64,
    pub uniform_width: usize,
}

/// Result of [`fidelity_aware_compress`]. `compressed` is `None` when no
/// threshold above [`MIN_THRESHOLD`] met the target.
#[derive(Debug, Clone)]
pub struct FidelitySearch {
    pub compressed: Option<CompressedWaveform>,
    pub initial_threshold: f64,
    pub trajectory: Vec<SearchStep>,
}

impl FidelitySearch {
    pub fn is_solved(&self) -> bool {
        self.compressed.is_some()
    }

    pub fn iterations(&self) -> usize {
        self.trajectory.len()
    }

    /// MSE of the returned stream, if any.
    pub fn final_mse(&self) -> Option<f64> {
        self.compressed.as_ref().and(self.trajectory.last().map(|s| s.mse))
    }
}

/// Finds the largest threshold of the form `t0 / 2^k` whose reconstruction
/// error is at most `target_error`.
///
/// `t0` is the largest coefficient magnitude, so the first attempt drops
/// everything but the dominant coefficient. The threshold halves after each
/// miss. `cfg.threshold` is ignored.
pub fn fidelity_aware_compress(
    w: &Waveform,
    target_error: f64,
    cfg: &CodecConfig,
) -> Result<FidelitySearch> {
    if !(target_error >= 0.0) {
        return Err(Error::invalid(format!(
            "target error must be non-negative, got {target_error}"
        )));
    }
    let encoder = Encoder::new(w, cfg.variant, cfg.bit_width)?;
    let t0 = encoder.max_magnitude();
    let mut t = t0;
    let mut trajectory = Vec::new();
    loop {
        let c = encoder.encode(t)?;
        let mse = encoder.mse_of(&c)?;
        trajectory.push(SearchStep {
            threshold: t,
            mse,
            uniform_width: c.uniform_width(),
        });
        if mse <= target_error {
            return Ok(FidelitySearch {
                compressed: Some(c),
                initial_threshold: t0,
                trajectory,
            });
        }
        t /= 2.0;
        if t < MIN_THRESHOLD {
            return Ok(FidelitySearch {
                compressed: None,
                initial_threshold: t0,
                trajectory,
            });
        }
    }
}
