use std::collections::BTreeMap;

use crate::codec::CompressedWaveform;
use crate::error::{Error, Result};
use crate::waveform::Channel;

/// Counts windows of both channels by occupied slots, before padding.
pub fn samples_per_window_histogram(library: &[CompressedWaveform]) -> Result<BTreeMap<usize, u64>> {
    if library.is_empty() {
        return Err(Error::invalid("histogram of an empty library"));
    }
    let mut hist = BTreeMap::new();
    for c in library {
        for ch in Channel::BOTH {
            for slots in c.occupied_slots(ch) {
                *hist.entry(slots).or_insert(0) += 1;
            }
        }
    }
    Ok(hist)
}
