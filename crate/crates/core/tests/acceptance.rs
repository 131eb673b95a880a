//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every line is printed. Exits non-zero
//! if any criterion fails. `cargo test -p cwm-core --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{golden_dir, golden_library, matrix_dct, matrix_idct, naive_dct, GOLDENS};
use cwm::capacity::{estimate_bandwidth, estimate_capacity, ControlSystemParams};
use cwm::codec::{
    compress, decode_channels, delta_compress, delta_decompress, fidelity_aware_compress,
    rle_decode, rle_encode, CodecConfig, CompressedWindow,
};
use cwm::corpus::{gen_corpus, CorpusParams};
use cwm::format::{from_bytes, read_library, to_bytes, write_library};
use cwm::memsim::{
    adaptive_stream, decompress_adaptive, plan_banks, qubit_capacity_gain, simulate_stream,
    simulate_uncompressed, AccessStats, AdaptiveWaveform, BankPlan, PipelineConfig, StreamLayout,
};
use cwm::pulse::{gen_drag, gen_flat_top, rotate};
use cwm::transform::{
    dct_n, idct_n, int_dct_window, int_idct_window, OpCounter, TransformVariant, WindowSize,
};
use cwm::waveform::{mse, BitWidth, QuantizedWaveform, Waveform};

const RATE: f64 = 4.54e9;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn int_cfg(ws: WindowSize) -> CodecConfig {
    CodecConfig::new(TransformVariant::int_dct_w(ws))
}

fn c1_capacity_gain() -> Outcome {
    let at = |ratio: f64, ws| qubit_capacity_gain(&PipelineConfig::with_ratio(ratio, ws), 3).unwrap();
    let g8 = at(16.0, WindowSize::W8);
    let g16 = at(16.0, WindowSize::W16);
    let g6 = at(6.0, WindowSize::W8);
    check(
        g8 == Ratio::new(16, 6) && g16 == Ratio::new(16, 3) && g6 == Ratio::from_integer(2),
        format!("gains {g8}, {g16}, {g6}"),
    )
}

fn c2_capacity_model() -> Outcome {
    let ibm = estimate_capacity(&ControlSystemParams::ibm());
    let google = estimate_capacity(&ControlSystemParams::google());
    let rel = (ibm - 18_000.0).abs() / 18_000.0;
    check(
        rel <= 0.10 && (google - 3_000.0).abs() / 3_000.0 <= 0.30,
        format!("IBM {ibm:.1} B ({:.1}% off 18 KB), Google {google:.1} B", 100.0 * rel),
    )
}

fn c3_bandwidth() -> Outcome {
    let bw = estimate_bandwidth(4.54e9, 32);
    check(
        (bw - 18.16e9).abs() <= 1e-12 * 18.16e9 && bw > 16e9,
        format!("{:.4} GB/s", bw / 1e9),
    )
}

fn c4_ratio_floor() -> Outcome {
    let corpus = gen_corpus(&CorpusParams::default()).map_err(|e| e.to_string())?;
    let lossless = CodecConfig::new(TransformVariant::dct_w(WindowSize::W16));
    let (mut min_all, mut min_flat) = (f64::INFINITY, f64::INFINITY);
    let mut audit = 0.0f64;
    for w in &corpus {
        let c = fidelity_aware_compress(w, 1e-5, &int_cfg(WindowSize::W16))
            .map_err(|e| e.to_string())?
            .compressed
            .ok_or_else(|| format!("{} has no solution", w.label()))?;
        let [i, q] = decode_channels(&c).map_err(|e| e.to_string())?;
        let decoded = Waveform::new(w.label(), i, q, RATE).map_err(|e| e.to_string())?;
        if mse(w, &decoded).map_err(|e| e.to_string())? > 1e-5 {
            return Err(format!("{} misses its MSE target", w.label()));
        }
        let exact = compress(w, &lossless).map_err(|e| e.to_string())?;
        let [li, lq] = decode_channels(&exact).map_err(|e| e.to_string())?;
        let lossless_decoded = Waveform::new(w.label(), li, lq, RATE).map_err(|e| e.to_string())?;
        audit = audit.max(mse(w, &lossless_decoded).map_err(|e| e.to_string())?);
        let r = c.compression_ratio();
        min_all = min_all.min(r);
        if w.len() == 1362 {
            min_flat = min_flat.min(r);
        }
    }
    check(
        min_all >= 5.0 && min_flat >= 8.0 && audit <= 1e-20,
        format!(
            "min R {min_all:.3} over {} pulses, min R {min_flat:.3} on 300 ns flat-tops (floor 8.0), lossless MSE {audit:.1e}",
            corpus.len()
        ),
    )
}

fn random_pulse(rng: &mut ChaCha8Rng) -> Waveform {
    if rng.random_bool(0.5) {
        let duration = rng.random_range(16e-9..80e-9);
        gen_drag(
            rng.random_range(0.05..0.9),
            duration / rng.random_range(3.0..6.0),
            rng.random_range(-2.0..2.0),
            duration,
            RATE,
        )
        .unwrap()
    } else {
        let ft = gen_flat_top(
            rng.random_range(0.05..0.9),
            rng.random_range(5e-9..40e-9),
            rng.random_range(0.0..200e-9),
            RATE,
        )
        .unwrap();
        rotate(&ft, rng.random_range(0.0..std::f64::consts::TAU)).unwrap()
    }
}

fn c5_fidelity() -> Outcome {
    let corpus = gen_corpus(&CorpusParams::default()).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let (mut violations, mut max_rise) = (0, 0.0f64);
    let mut audit = |s: &cwm::codec::FidelitySearch| {
        for p in s.trajectory.windows(2) {
            if p[1].mse > p[0].mse {
                violations += 1;
                max_rise = max_rise.max(p[1].mse - p[0].mse);
            }
        }
    };
    for w in &corpus {
        let s = fidelity_aware_compress(w, 1e-4, &int_cfg(WindowSize::W16)).map_err(|e| e.to_string())?;
        let m = s.final_mse().ok_or_else(|| format!("{} has no solution", w.label()))?;
        worst = worst.max(m);
        audit(&s);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let trials = 10_000;
    let mut unsolved = 0;
    for _ in 0..trials {
        let w = random_pulse(&mut rng);
        let ws = if rng.random_bool(0.5) { WindowSize::W8 } else { WindowSize::W16 };
        let eps = 10f64.powf(rng.random_range(-5.0..-3.0));
        let s = fidelity_aware_compress(&w, eps, &int_cfg(ws)).map_err(|e| e.to_string())?;
        audit(&s);
        match s.final_mse() {
            Some(m) if m > eps => return Err(format!("solution above target: {m} > {eps}")),
            Some(_) => {}
            None => unsolved += 1,
        }
    }
    // Rounding the reconstruction to integer samples adds about
    // 1 / (12 S^2) of MSE that moves with the kept coefficient set.
    let floor = 1.0 / (12.0 * 181.0f64.powi(2));
    check(
        worst <= 1e-4 && violations == 0,
        format!(
            "worst corpus MSE {worst:.2e}; {violations} MSE increases over corpus + {trials} random trials, largest {max_rise:.1e} (sample rounding floor {floor:.1e}); {unsolved} unsolved"
        ),
    )
}

fn c6_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 0..1_000_000 {
        let ws = if n % 2 == 0 { 8 } else { 16 };
        let kept = rng.random_range(0..=ws);
        let mut y: Vec<i16> = (0..ws)
            .map(|k| {
                if k >= kept || rng.random_bool(0.2) {
                    0
                } else {
                    rng.random_range(i16::MIN + 1..=i16::MAX)
                }
            })
            .collect();
        if n % 7 == 0 {
            y.reverse();
        }
        let enc = rle_encode(&y);
        let width = enc.occupied_slots().max(1) + rng.random_range(0..=ws - enc.occupied_slots().max(1));
        let slots = enc.to_slots(width);
        let back = CompressedWindow::from_slots(&slots, ws, n).map_err(|e| e.to_string())?;
        if rle_decode(&back, ws).map_err(|e| e.to_string())? != y {
            return Err(format!("RLE round trip failed on {y:?}"));
        }
    }

    for n in 0..2_000 {
        let len = rng.random_range(1..300);
        let bw = [BitWidth::B12, BitWidth::B14, BitWidth::B16][n % 3];
        let (lo, hi) = (bw.min_value(), bw.max_value());
        let walk = n % 2 == 0;
        let mut v = rng.random_range(lo..=hi);
        let mut gen = || {
            if walk {
                v = (v + rng.random_range(-40..=40)).clamp(lo, hi);
                v
            } else {
                rng.random_range(lo..=hi)
            }
        };
        let i: Vec<i32> = (0..len).map(|_| gen()).collect();
        let q: Vec<i32> = (0..len).map(|_| gen()).collect();
        let qw = QuantizedWaveform {
            label: "fuzz".into(),
            i_samples: i,
            q_samples: q,
            bit_width: bw,
            scale: 1,
        };
        if delta_decompress(&delta_compress(&qw)) != qw {
            return Err("delta round trip failed".into());
        }
    }

    let mut ops = OpCounter::default();
    let mut calls = 0;
    for n in 0..100_000 {
        let ws = if n % 2 == 0 { 8 } else { 16 };
        let x: Vec<i32> = (0..ws).map(|_| rng.random_range(-32768..=32767)).collect();
        let mut call = OpCounter::default();
        let y = int_dct_window(&x, &mut call).map_err(|e| e.to_string())?;
        if y != matrix_dct(&x) {
            return Err(format!("forward mismatch on {x:?}"));
        }
        let z: Vec<i32> = (0..ws).map(|_| rng.random_range(-(1 << 20)..(1 << 20))).collect();
        let back = int_idct_window(&z, &mut call).map_err(|e| e.to_string())?;
        if back != matrix_idct(&z) || int_idct_window(&y, &mut call).unwrap() != matrix_idct(&y) {
            return Err(format!("inverse mismatch on {z:?}"));
        }
        if call.multiplies != 0 {
            return Err(format!("{} multiplies in one call", call.multiplies));
        }
        ops += call;
        calls += 3;
    }
    check(
        ops.multiplies == 0,
        format!(
            "1e6 RLE windows, 2000 delta streams, 1e5 oracle windows; {calls} calls, {} adds, {} shifts, 0 multiplies",
            ops.adds, ops.shifts
        ),
    )
}

fn c7_float() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut round, mut oracle, mut parseval) = (0.0f64, 0.0f64, 0.0f64);
    for n in [8, 16, 64, 1000] {
        for _ in 0..5 {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y = dct_n(&x).map_err(|e| e.to_string())?;
            let back = idct_n(&y).map_err(|e| e.to_string())?;
            let want = naive_dct(&x);
            round = x.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(round, f64::max);
            oracle = y.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(oracle, f64::max);
            let ex: f64 = x.iter().map(|v| v * v).sum();
            let ey: f64 = y.iter().map(|v| v * v).sum();
            parseval = parseval.max((ex - ey).abs() / ex);
        }
    }
    check(
        round <= 1e-10 && oracle <= 1e-10 && parseval <= 1e-9,
        format!("round trip {round:.1e}, oracle {oracle:.1e}, Parseval {parseval:.1e}"),
    )
}

/// Slots the banks can fetch per cycle against slots the DAC consumes.
fn deficient(banks: u64, ratio: f64, ws: usize, width: usize) -> bool {
    (banks as f64) < ratio * width as f64 / ws as f64 - 1e-9
}

fn c8_streaming() -> Outcome {
    let mut grid = Vec::new();
    for ws in [WindowSize::W8, WindowSize::W16] {
        for ratio in [8.0, 16.0, 32.0, 4.54e9 / 0.3e9] {
            if ratio >= ws.get() as f64 {
                grid.push((ratio, ws));
            }
        }
    }
    grid.push((6.0, WindowSize::W8));
    let (mut configs, mut starved, mut skipped) = (0, 0, 0);
    for &(ratio, ws) in &grid {
        for width in 1..=4 {
            let cfg = PipelineConfig::with_ratio(ratio, ws);
            let layout = StreamLayout {
                windows: 256,
                window_size: ws.get(),
                uniform_width: width,
            };
            let plan = plan_banks(Some(width), &cfg).map_err(|e| e.to_string())?;
            let t = simulate_stream(&layout, &cfg, &plan).map_err(|e| e.to_string())?;
            if t.underrun_count != 0 || t.samples_played != 256 * ws.get() as u64 {
                return Err(format!("ratio {ratio} WS {ws} width {width}: {} underruns", t.underrun_count));
            }
            configs += 1;
            let fewer = BankPlan {
                banks_per_channel: plan.banks_per_channel - 1,
                slots_per_fetch: plan.banks_per_channel - 1,
                ..plan
            };
            if fewer.banks_per_channel == 0 || !deficient(fewer.banks_per_channel, ratio, ws.get(), width) {
                skipped += 1;
                continue;
            }
            if simulate_stream(&layout, &cfg, &fewer).map_err(|e| e.to_string())?.underrun_count == 0 {
                return Err(format!("ratio {ratio} WS {ws} width {width}: no underrun with {} banks", fewer.banks_per_channel));
            }
            starved += 1;
        }
        let cfg = PipelineConfig::with_ratio(ratio, ws);
        let plan = plan_banks(None, &cfg).map_err(|e| e.to_string())?;
        if simulate_uncompressed(4096, &cfg, &plan).map_err(|e| e.to_string())?.underrun_count != 0 {
            return Err(format!("uncompressed ratio {ratio} underruns at plan"));
        }
        let fewer = BankPlan {
            banks_per_channel: plan.banks_per_channel - 1,
            slots_per_fetch: plan.banks_per_channel - 1,
            ..plan
        };
        if simulate_uncompressed(4096, &cfg, &fewer).map_err(|e| e.to_string())?.underrun_count == 0 {
            return Err(format!("uncompressed ratio {ratio} survives one bank short"));
        }
    }
    check(
        true,
        format!("{configs} configs clean at plan; {starved} one-bank-short configs underrun, {skipped} still have enough bandwidth"),
    )
}

fn c9_adaptive() -> Outcome {
    let w = gen_flat_top(0.4, 20e-9, 100e-9, RATE).map_err(|e| e.to_string())?;
    let c = fidelity_aware_compress(&w, 1e-5, &int_cfg(WindowSize::W16))
        .map_err(|e| e.to_string())?
        .compressed
        .ok_or("flat-top has no solution")?;
    let a = AdaptiveWaveform::new(&c).map_err(|e| e.to_string())?;
    let identical = decompress_adaptive(&a).map_err(|e| e.to_string())? == decode_channels(&c).map_err(|e| e.to_string())?;
    let cfg = PipelineConfig::with_ratio(16.0, WindowSize::W16);
    let (trace, adaptive) = adaptive_stream(&c, &cfg).map_err(|e| e.to_string())?;
    let base = AccessStats::compressed(&c);
    let mem = 1.0 - adaptive.memory_accesses as f64 / base.memory_accesses as f64;
    let idct = 1.0 - adaptive.idct_invocations as f64 / base.idct_invocations as f64;
    check(
        mem >= 0.65 && idct >= 0.65 && identical && trace.underrun_count == 0,
        format!(
            "memory accesses -{:.1}%, IDCT invocations -{:.1}%, identical output {identical}, {} underruns",
            100.0 * mem,
            100.0 * idct,
            trace.underrun_count
        ),
    )
}

fn c10_format() -> Outcome {
    let corpus = gen_corpus(&CorpusParams { qubits: 3, ..Default::default() }).map_err(|e| e.to_string())?;
    let variants = [
        TransformVariant::dct_n(),
        TransformVariant::dct_w(WindowSize::W8),
        TransformVariant::int_dct_w(WindowSize::W8),
        TransformVariant::int_dct_w(WindowSize::W16),
    ];
    for v in variants {
        let cfg = CodecConfig::new(v).with_threshold(1e-3);
        let lib: Vec<_> = corpus.iter().map(|w| compress(w, &cfg)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        let mut file = Vec::new();
        write_library(&mut file, &lib).map_err(|e| e.to_string())?;
        let back = read_library(file.as_slice()).map_err(|e| e.to_string())?;
        for (a, b) in lib.iter().zip(&back) {
            let bits = |c| -> Result<Vec<u64>, String> {
                let [i, q] = decode_channels(c).map_err(|e| e.to_string())?;
                Ok(i.iter().chain(&q).map(|v| v.to_bits()).collect())
            };
            if bits(a)? != bits(b)? {
                return Err(format!("{v}: {} decodes differently after the file round trip", a.label()));
            }
        }
    }
    for (name, ws) in GOLDENS {
        let stored = std::fs::read(golden_dir().join(name)).map_err(|e| format!("{name}: {e}"))?;
        if stored != to_bytes(&golden_library(ws)).map_err(|e| e.to_string())?
            || from_bytes(&stored).map_err(|e| e.to_string())? != golden_library(ws)
        {
            return Err(format!("{name} drifted"));
        }
    }
    check(true, format!("4 variants round trip bit-exactly, {} golden files unchanged", GOLDENS.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("qubit capacity gain", c1_capacity_gain, Duration::from_secs(1)),
        ("capacity model", c2_capacity_model, Duration::from_secs(1)),
        ("bandwidth model", c3_bandwidth, Duration::from_secs(1)),
        ("compression ratio floor", c4_ratio_floor, Duration::from_secs(30)),
        ("fidelity proxy", c5_fidelity, Duration::from_secs(60)),
        ("exactness suite", c6_exactness, Duration::from_secs(120)),
        ("float transform", c7_float, Duration::from_secs(10)),
        ("streaming feasibility", c8_streaming, Duration::from_secs(30)),
        ("adaptive bypass", c9_adaptive, Duration::from_secs(5)),
        ("format stability", c10_format, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (n, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over time limit")),
            Err(d) => (false, d),
        };
        failed += usize::from(!ok);
        println!(
            "{} {:>2} {name}: {detail} [{:.2}s / {}s]",
            if ok { "PASS" } else { "FAIL" },
            n + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("{} of 10 criteria pass", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
