//! Cycle-level model of compressed waveform playback.
//!
//! Every fabric cycle runs four stages, in this order:
//!
//! 1. the DAC drains its per-cycle quota from the sample FIFO,
//! 2. IDCT results whose latency has elapsed land in the FIFO,
//! 3. the decoder issues ready windows to the IDCT engines,
//! 4. each bank fetches one slot into the slot buffer.
//!
//! One cycle of engine output is `engines * window_size` samples. The FIFO
//! holds `latency + 1` of those and the DAC holds off until it is primed
//! with `latency` of them, which covers the IDCT delay. From then on a cycle
//! in which the FIFO cannot cover the quota is an underrun. Fractional
//! clock ratios are handled by draining `floor((k + 1) r) - floor(k r)`
//! samples on the `k`-th playback cycle.

use std::collections::VecDeque;
use std::io::Write;

use serde::Serialize;

use super::{BankPlan, MemoryMode, PipelineConfig};
use crate::codec::CompressedWaveform;
use crate::error::{Error, Result};

/// Window geometry of a compressed stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamLayout {
    pub windows: usize,
    pub window_size: usize,
    pub uniform_width: usize,
}

impl StreamLayout {
    pub fn of(c: &CompressedWaveform) -> Self {
        StreamLayout {
            windows: c.window_count(),
            window_size: c.window_size(),
            uniform_width: c.uniform_width(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CycleRecord {
    pub cycle: u64,
    /// Slots (or raw samples) fetched from memory this cycle.
    pub fetches: u64,
    /// Samples that entered the FIFO this cycle.
    pub decoder_out: u64,
    pub fifo_occupancy: u64,
    pub underrun: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StreamTrace {
    pub records: Vec<CycleRecord>,
    pub underrun_count: u64,
    pub samples_played: u64,
    pub memory_accesses: u64,
    pub idct_invocations: u64,
    pub fifo_depth: u64,
}

impl StreamTrace {
    /// Writes `cycle,fetches,decoder_out,fifo_occupancy,underrun` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["cycle", "fetches", "decoder_out", "fifo_occupancy", "underrun"])?;
        for r in &self.records {
            w.write_record([
                r.cycle.to_string(),
                r.fetches.to_string(),
                r.decoder_out.to_string(),
                r.fifo_occupancy.to_string(),
                u8::from(r.underrun).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Work item for the decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Unit {
    /// A stored window: `uniform_width` slots through one IDCT engine.
    Window,
    /// A plateau served from one codeword slot, bypassing the IDCT.
    Plateau(usize),
}

/// Simulates playback of a compressed stream with the banks and engines
/// of `plan`, which may differ from what [`super::plan_banks`] recommends.
pub fn simulate_stream(
    layout: &StreamLayout,
    cfg: &PipelineConfig,
    plan: &BankPlan,
) -> Result<StreamTrace> {
    if layout.window_size != cfg.window_size.get() {
        return Err(Error::invalid(format!(
            "stream uses {}-sample windows but the pipeline is configured for {}",
            layout.window_size, cfg.window_size
        )));
    }
    let units = vec![Unit::Window; layout.windows];
    simulate_units(&units, layout.window_size, layout.uniform_width, cfg, plan)
}

pub(crate) fn simulate_units(
    units: &[Unit],
    window_size: usize,
    width: usize,
    cfg: &PipelineConfig,
    plan: &BankPlan,
) -> Result<StreamTrace> {
    cfg.validate()?;
    if plan.mode == MemoryMode::Uncompressed {
        return Err(Error::invalid("compressed stream needs a compressed bank plan"));
    }
    if plan.banks_per_channel == 0 || plan.engines == 0 {
        return Err(Error::invalid("bank plan needs at least one bank and one engine"));
    }
    if width == 0 || width > window_size {
        return Err(Error::invalid(format!("uniform width {width} outside 1..={window_size}")));
    }
    let ws = window_size as u64;
    let width = width as u64;
    let banks = plan.banks_per_channel;
    let chunk = plan.engines * ws;
    let latency = cfg.idct_latency_cycles as u64;
    let depth = (latency + 1) * chunk;
    let total_samples: u64 = units
        .iter()
        .map(|u| match u {
            Unit::Window => ws,
            Unit::Plateau(n) => *n as u64,
        })
        .sum();
    let total_slots: u64 = units
        .iter()
        .map(|u| match u {
            Unit::Window => width,
            Unit::Plateau(_) => 1,
        })
        .sum();
    let slot_cap = 2 * banks.max(width);

    let mut dac = Dac::new(cfg.clock_ratio(), total_samples, (latency * chunk).min(total_samples));
    let mut fetched = 0u64;
    let mut claimed = 0u64;
    let mut next = 0usize;
    let mut plateau_left = 0u64;
    let mut in_flight: VecDeque<(u64, u64)> = VecDeque::new();
    let mut in_flight_samples = 0u64;
    let mut fifo = 0u64;
    let mut idct = 0u64;
    let mut records = Vec::new();
    let limit = 16 * (total_slots + total_samples) + 64 * (latency + 1);

    for cycle in 0.. {
        if cycle > limit {
            return Err(Error::Validation(format!(
                "stream made no progress after {cycle} cycles"
            )));
        }
        let underrun = dac.drain(&mut fifo);

        let mut out = 0;
        while in_flight.front().is_some_and(|&(t, _)| t <= cycle) {
            let (_, n) = in_flight.pop_front().expect("checked non-empty");
            fifo += n;
            in_flight_samples -= n;
            out += n;
        }

        // Samples the DAC is sure to drain before anything issued now lands.
        let credit = dac.guaranteed_drain(latency);
        let mut space = (depth + credit).saturating_sub(fifo + in_flight_samples);
        let mut budget = chunk;
        let mut engines_left = plan.engines;
        loop {
            if plateau_left > 0 {
                let n = plateau_left.min(budget).min(space);
                if n == 0 {
                    break;
                }
                in_flight.push_back((cycle + latency, n));
                in_flight_samples += n;
                plateau_left -= n;
                budget -= n;
                space -= n;
                continue;
            }
            let Some(&unit) = units.get(next) else { break };
            let buffered = fetched - claimed;
            match unit {
                Unit::Window => {
                    if buffered < width || engines_left == 0 || budget < ws || space < ws {
                        break;
                    }
                    claimed += width;
                    engines_left -= 1;
                    budget -= ws;
                    space -= ws;
                    in_flight.push_back((cycle + latency, ws));
                    in_flight_samples += ws;
                    idct += 1;
                }
                Unit::Plateau(n) => {
                    if buffered < 1 {
                        break;
                    }
                    claimed += 1;
                    plateau_left = n as u64;
                }
            }
            next += 1;
        }

        let room = slot_cap - (fetched - claimed);
        let fetches = banks.min(total_slots - fetched).min(room);
        fetched += fetches;

        records.push(CycleRecord {
            cycle,
            fetches,
            decoder_out: out,
            fifo_occupancy: fifo,
            underrun,
        });
        if dac.done() {
            break;
        }
    }
    Ok(StreamTrace {
        records,
        underrun_count: dac.underruns,
        samples_played: dac.played,
        memory_accesses: fetched,
        idct_invocations: idct,
        fifo_depth: depth,
    })
}

/// Simulates playback of `samples` raw samples interleaved over the banks of `plan`.
pub fn simulate_uncompressed(
    samples: usize,
    cfg: &PipelineConfig,
    plan: &BankPlan,
) -> Result<StreamTrace> {
    cfg.validate()?;
    if plan.banks_per_channel == 0 {
        return Err(Error::invalid("bank plan needs at least one bank"));
    }
    let total = samples as u64;
    let banks = plan.banks_per_channel;
    let chunk = (cfg.clock_ratio().ceil() as u64).max(1);
    let depth = 2 * chunk.max(banks);
    let mut dac = Dac::new(cfg.clock_ratio(), total, chunk.min(total));
    let mut fifo = 0u64;
    let mut fetched = 0u64;
    let mut records = Vec::new();
    for cycle in 0.. {
        if cycle > 16 * total + 64 {
            return Err(Error::Validation("stream made no progress".into()));
        }
        let underrun = dac.drain(&mut fifo);
        let fetches = banks.min(total - fetched).min(depth - fifo);
        fetched += fetches;
        fifo += fetches;
        records.push(CycleRecord {
            cycle,
            fetches,
            decoder_out: fetches,
            fifo_occupancy: fifo,
            underrun,
        });
        if dac.done() {
            break;
        }
    }
    Ok(StreamTrace {
        records,
        underrun_count: dac.underruns,
        samples_played: dac.played,
        memory_accesses: fetched,
        idct_invocations: 0,
        fifo_depth: depth,
    })
}

struct Dac {
    ratio: f64,
    total: u64,
    prime: u64,
    started: bool,
    ticks: u64,
    played: u64,
    underruns: u64,
}

impl Dac {
    fn new(ratio: f64, total: u64, prime: u64) -> Self {
        Dac {
            ratio,
            total,
            prime,
            started: false,
            ticks: 0,
            played: 0,
            underruns: 0,
        }
    }

    fn quota(&self, tick: u64) -> u64 {
        ((tick + 1) as f64 * self.ratio).floor() as u64 - (tick as f64 * self.ratio).floor() as u64
    }

    /// Runs one playback cycle; returns whether it underran.
    fn drain(&mut self, fifo: &mut u64) -> bool {
        if !self.started {
            if *fifo < self.prime {
                return false;
            }
            self.started = true;
        }
        if self.done() {
            return false;
        }
        let want = self.quota(self.ticks).min(self.total - self.played);
        let take = want.min(*fifo);
        *fifo -= take;
        self.played += take;
        self.ticks += 1;
        let short = take < want;
        if short {
            self.underruns += 1;
        }
        short
    }

    fn guaranteed_drain(&self, cycles: u64) -> u64 {
        if !self.started {
            return 0;
        }
        let drained: u64 = (self.ticks..self.ticks + cycles).map(|t| self.quota(t)).sum();
        drained.min(self.total - self.played)
    }

    fn done(&self) -> bool {
        self.played >= self.total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memsim::plan_banks;
    use crate::transform::WindowSize;

    fn layout(windows: usize, ws: usize, width: usize) -> StreamLayout {
        StreamLayout {
            windows,
            window_size: ws,
            uniform_width: width,
        }
    }

    #[test]
    fn planned_banks_never_underrun() {
        for (ratio, ws, width) in [(16.0, WindowSize::W16, 3), (16.0, WindowSize::W8, 3), (6.0, WindowSize::W8, 3)] {
            let cfg = PipelineConfig::with_ratio(ratio, ws);
            let plan = plan_banks(Some(width), &cfg).unwrap();
            let t = simulate_stream(&layout(100, ws.get(), width), &cfg, &plan).unwrap();
            assert_eq!(t.underrun_count, 0, "ratio {ratio} ws {ws}");
            assert_eq!(t.samples_played, 100 * ws.get() as u64);
            assert_eq!(t.memory_accesses, 100 * width as u64);
            assert!(t.records.iter().all(|r| r.fifo_occupancy <= t.fifo_depth));
        }
    }

    #[test]
    fn starved_plan_underruns() {
        let cfg = PipelineConfig::with_ratio(16.0, WindowSize::W16);
        let mut plan = plan_banks(Some(3), &cfg).unwrap();
        plan.banks_per_channel = 2;
        let t = simulate_stream(&layout(100, 16, 3), &cfg, &plan).unwrap();
        assert!(t.underrun_count > 0);
        assert_eq!(t.samples_played, 1600);
    }

    #[test]
    fn uncompressed_baseline() {
        let cfg = PipelineConfig::with_ratio(16.0, WindowSize::W16);
        let plan = plan_banks(None, &cfg).unwrap();
        let t = simulate_uncompressed(1362, &cfg, &plan).unwrap();
        assert_eq!(t.underrun_count, 0);
        assert_eq!(t.memory_accesses, 1362);
        let mut short = plan;
        short.banks_per_channel = 15;
        assert!(simulate_uncompressed(1362, &cfg, &short).unwrap().underrun_count > 0);
    }

    #[test]
    fn longer_latency_only_delays() {
        let mut cfg = PipelineConfig::with_ratio(16.0, WindowSize::W16);
        cfg.idct_latency_cycles = 4;
        let plan = plan_banks(Some(3), &cfg).unwrap();
        let t = simulate_stream(&layout(50, 16, 3), &cfg, &plan).unwrap();
        assert_eq!(t.underrun_count, 0);
    }

    #[test]
    fn csv_export_has_header_and_rows() {
        let cfg = PipelineConfig::with_ratio(16.0, WindowSize::W16);
        let plan = plan_banks(Some(2), &cfg).unwrap();
        let t = simulate_stream(&layout(4, 16, 2), &cfg, &plan).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("cycle,fetches,decoder_out,fifo_occupancy,underrun"));
        assert_eq!(lines.count(), t.records.len());
    }
}
