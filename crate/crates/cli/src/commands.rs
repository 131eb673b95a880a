use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use cwm::codec::{compress as compress_fixed, decompress as decode, fidelity_aware_compress};
use cwm::codec::{CodecConfig, CompressedWaveform};
use cwm::corpus::{gen_corpus_library, CorpusParams};
use cwm::format::{read_library, write_library};
use cwm::library::WaveformLibrary;
use cwm::memsim::{
    adaptive_stream, plan_banks, qubit_capacity_gain, relative_energy, simulate_stream,
    AccessStats, BankPlan, EnergyWeights, MemoryMode, PipelineConfig, StreamLayout, StreamTrace,
};
use cwm::report::build_report;
use cwm::transform::{TransformVariant, WindowSize};
use cwm::waveform::BitWidth;

use crate::{CompressArgs, DecompressArgs, GenCorpusArgs, ReportArgs, SimulateArgs, SweepArgs};

/// The threshold search found no acceptable threshold for some waveforms.
#[derive(Debug)]
pub struct NoSolution(pub Vec<String>);

impl std::fmt::Display for NoSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "no threshold meets the target error for {}", self.0.join(", "))
    }
}

impl std::error::Error for NoSolution {}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush().with_context(|| format!("writing {}", path.display()))
}

fn read_waveforms(path: &Path) -> Result<WaveformLibrary> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    WaveformLibrary::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_compressed(path: &Path) -> Result<Vec<CompressedWaveform>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_library(BufReader::new(f)).with_context(|| format!("reading {}", path.display()))
}

pub fn gen_corpus(a: &GenCorpusArgs) -> Result<()> {
    let lib = gen_corpus_library(&CorpusParams {
        qubits: a.qubits,
        seed: a.seed,
        sample_rate_hz: a.sample_rate,
        ..Default::default()
    })?;
    lib.write(&a.output)
        .with_context(|| format!("writing {}", a.output.display()))?;
    eprintln!("{} waveforms written to {}", lib.entries.len(), a.output.display());
    Ok(())
}

pub fn compress(a: &CompressArgs) -> Result<()> {
    let ws = WindowSize::try_from(a.window_size)?;
    let cfg = CodecConfig {
        bit_width: BitWidth::try_from(a.bit_width)?,
        ..CodecConfig::new(TransformVariant::new(a.variant, ws))
    };
    let waveforms = read_waveforms(&a.input)?.waveforms()?;
    let results: Vec<(String, Option<CompressedWaveform>)> = waveforms
        .par_iter()
        .map(|w| {
            let c = match (a.target_error, a.threshold) {
                (Some(eps), _) => fidelity_aware_compress(w, eps, &cfg)?.compressed,
                (None, Some(t)) => Some(compress_fixed(w, &cfg.with_threshold(t))?),
                (None, None) => unreachable!("clap requires one of the two"),
            };
            Ok((w.label().to_owned(), c))
        })
        .collect::<Result<_, cwm::Error>>()?;
    let unsolved: Vec<String> = results
        .iter()
        .filter(|(_, c)| c.is_none())
        .map(|(l, _)| l.clone())
        .collect();
    if !unsolved.is_empty() {
        return Err(NoSolution(unsolved).into());
    }
    let mut lib: Vec<CompressedWaveform> = results.into_iter().filter_map(|(_, c)| c).collect();
    lib.sort_by(|x, y| x.label().cmp(y.label()));

    let mut out = create(&a.output)?;
    write_library(&mut out, &lib)?;
    out.flush()
        .with_context(|| format!("writing {}", a.output.display()))?;
    let min = lib.iter().map(|c| c.compression_ratio()).fold(f64::INFINITY, f64::min);
    eprintln!("{} waveforms compressed, min R {min:.3}", lib.len());
    Ok(())
}

pub fn decompress(a: &DecompressArgs) -> Result<()> {
    let lib = read_compressed(&a.input)?;
    let waveforms = lib
        .par_iter()
        .map(|c| decode(c, a.sample_rate))
        .collect::<Result<Vec<_>, _>>()?;
    let out = WaveformLibrary::from_waveforms(a.sample_rate, &waveforms, None)?;
    out.write(&a.output)
        .with_context(|| format!("writing {}", a.output.display()))?;
    Ok(())
}

pub fn report(a: &ReportArgs) -> Result<()> {
    let originals = read_waveforms(&a.input)?.waveforms()?;
    let compressed = read_compressed(&a.compressed)?;
    let r = build_report(&originals, &compressed)?;
    write_json(&a.output, &r)?;
    if let Some(path) = &a.csv {
        let mut out = create(path)?;
        r.write_csv(&mut out)?;
        out.flush()?;
    }
    eprintln!(
        "R min {:.3} mean {:.3} max {:.3}, max MSE {:.3e}",
        r.ratio.min, r.ratio.mean, r.ratio.max, r.max_mse
    );
    Ok(())
}

#[derive(Debug, Serialize)]
struct SimulationRow {
    label: String,
    mode: MemoryMode,
    banks_per_channel: u64,
    engines: u64,
    cycles: usize,
    fifo_depth: u64,
    underruns: u64,
    samples_played: u64,
    memory_accesses: u64,
    idct_invocations: u64,
    /// Energy proxy relative to reading every sample from memory.
    relative_energy: f64,
}

#[derive(Debug, Serialize)]
struct SimulationStats {
    clock_ratio: f64,
    window_size: usize,
    idct_latency_cycles: u32,
    waveforms: Vec<SimulationRow>,
    total_underruns: u64,
}

fn simulate_one(
    c: &CompressedWaveform,
    a: &SimulateArgs,
) -> Result<(SimulationRow, StreamTrace), cwm::Error> {
    let ws = c.variant().window_size().ok_or_else(|| {
        cwm::Error::Validation(format!("{:?} is not windowed and cannot be streamed", c.label()))
    })?;
    let cfg = PipelineConfig {
        idct_latency_cycles: a.latency,
        ..PipelineConfig::with_ratio(a.ratio, ws)
    };
    let (trace, stats, plan) = if a.adaptive {
        let (trace, stats) = adaptive_stream(c, &cfg)?;
        let plan = BankPlan::required(&cfg, MemoryMode::Adaptive, c.uniform_width())?;
        (trace, stats, plan)
    } else {
        let mut plan = plan_banks(Some(c.uniform_width()), &cfg)?;
        if let Some(banks) = a.banks {
            plan.banks_per_channel = banks;
            plan.slots_per_fetch = banks;
        }
        let trace = simulate_stream(&StreamLayout::of(c), &cfg, &plan)?;
        (trace, AccessStats::compressed(c), plan)
    };
    let baseline = AccessStats::uncompressed(c.original_length());
    let row = SimulationRow {
        label: c.label().to_owned(),
        mode: stats.mode,
        banks_per_channel: plan.banks_per_channel,
        engines: plan.engines,
        cycles: trace.records.len(),
        fifo_depth: trace.fifo_depth,
        underruns: trace.underrun_count,
        samples_played: trace.samples_played,
        memory_accesses: stats.memory_accesses,
        idct_invocations: stats.idct_invocations,
        relative_energy: relative_energy(&stats, &baseline, &EnergyWeights::default())?,
    };
    Ok((row, trace))
}

pub fn simulate(a: &SimulateArgs) -> Result<()> {
    let mut lib = read_compressed(&a.input)?;
    if let Some(label) = &a.label {
        lib.retain(|c| c.label() == label);
        if lib.is_empty() {
            bail!(cwm::Error::Validation(format!("no waveform labelled {label:?}")));
        }
    }
    let results = lib
        .par_iter()
        .map(|c| simulate_one(c, a))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(path) = &a.trace {
        let mut out = create(path)?;
        results[0].1.write_csv(&mut out)?;
        out.flush()?;
    }
    let waveforms: Vec<SimulationRow> = results.into_iter().map(|(r, _)| r).collect();
    let stats = SimulationStats {
        clock_ratio: a.ratio,
        window_size: lib[0].window_size(),
        idct_latency_cycles: a.latency,
        total_underruns: waveforms.iter().map(|r| r.underruns).sum(),
        waveforms,
    };
    write_json(&a.output, &stats)?;
    eprintln!(
        "{} waveforms simulated, {} underruns",
        stats.waveforms.len(),
        stats.total_underruns
    );
    Ok(())
}

#[derive(Debug, Serialize)]
struct SweepRow {
    ratio: f64,
    window_size: usize,
    width: usize,
    engines: u64,
    uncompressed_banks: u64,
    compressed_banks: u64,
    gain: String,
    gain_value: f64,
    underruns_at_plan: u64,
    underruns_one_bank_short: Option<u64>,
    /// Uncompressed over compressed memory accesses.
    access_ratio: f64,
}

fn sweep_row(ratio: f64, ws: WindowSize, width: usize, windows: usize) -> Result<SweepRow, cwm::Error> {
    let cfg = PipelineConfig::with_ratio(ratio, ws);
    let gain = qubit_capacity_gain(&cfg, width)?;
    let plan = plan_banks(Some(width), &cfg)?;
    let uncompressed = plan_banks(None, &cfg)?;
    let layout = StreamLayout {
        windows,
        window_size: ws.get(),
        uniform_width: width,
    };
    let at_plan = simulate_stream(&layout, &cfg, &plan)?;
    let short = match plan.banks_per_channel {
        1 => None,
        b => {
            let fewer = BankPlan {
                banks_per_channel: b - 1,
                slots_per_fetch: b - 1,
                ..plan
            };
            Some(simulate_stream(&layout, &cfg, &fewer)?.underrun_count)
        }
    };
    Ok(SweepRow {
        ratio,
        window_size: ws.get(),
        width,
        engines: plan.engines,
        uncompressed_banks: uncompressed.banks_per_channel,
        compressed_banks: plan.banks_per_channel,
        gain: gain.to_string(),
        gain_value: *gain.numer() as f64 / *gain.denom() as f64,
        underruns_at_plan: at_plan.underrun_count,
        underruns_one_bank_short: short,
        access_ratio: ws.get() as f64 / width as f64,
    })
}

pub fn sweep(a: &SweepArgs) -> Result<()> {
    let mut grid = Vec::new();
    for &ratio in &a.ratio {
        for &ws in &a.window_size {
            let ws = WindowSize::try_from(ws)?;
            for &width in &a.width {
                grid.push((ratio, ws, width));
            }
        }
    }
    let rows = grid
        .par_iter()
        .map(|&(r, ws, w)| sweep_row(r, ws, w, a.windows))
        .collect::<Result<Vec<_>, _>>()?;
    let out: Box<dyn Write> = match &a.output {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(out);
    for row in &rows {
        w.serialize(row)?;
    }
    w.flush()?;
    if let Some(bad) = rows.iter().find(|r| r.underruns_at_plan > 0) {
        bail!(cwm::Error::Validation(format!(
            "ratio {} WS {} width {} underruns at its planned bank count",
            bad.ratio, bad.window_size, bad.width
        )));
    }
    Ok(())
}
