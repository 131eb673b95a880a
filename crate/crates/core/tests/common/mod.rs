//! Oracles and fixtures shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::PathBuf;

use cwm::codec::{fidelity_aware_compress, CodecConfig, CompressedWaveform};
use cwm::corpus::{gen_corpus, CorpusParams};
use cwm::transform::{TransformVariant, WindowSize};

/// Orthonormal DCT-II by direct summation.
pub fn naive_dct(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    (0..x.len())
        .map(|k| {
            let w = if k == 0 { (1.0 / n).sqrt() } else { (2.0 / n).sqrt() };
            w * x
                .iter()
                .enumerate()
                .map(|(i, &v)| v * (PI * (2 * i + 1) as f64 * k as f64 / (2.0 * n)).cos())
                .sum::<f64>()
        })
        .collect()
}

/// Orthonormal DCT-III by direct summation.
pub fn naive_idct(y: &[f64]) -> Vec<f64> {
    let n = y.len() as f64;
    (0..y.len())
        .map(|i| {
            y.iter()
                .enumerate()
                .map(|(k, &v)| {
                    let w = if k == 0 { (1.0 / n).sqrt() } else { (2.0 / n).sqrt() };
                    w * v * (PI * (2 * i + 1) as f64 * k as f64 / (2.0 * n)).cos()
                })
                .sum()
        })
        .collect()
}

/// The 16-point HEVC core transform, written out row by row.
pub const HEVC16: [[i32; 16]; 16] = [
    [64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64],
    [90, 87, 80, 70, 57, 43, 25, 9, -9, -25, -43, -57, -70, -80, -87, -90],
    [89, 75, 50, 18, -18, -50, -75, -89, -89, -75, -50, -18, 18, 50, 75, 89],
    [87, 57, 9, -43, -80, -90, -70, -25, 25, 70, 90, 80, 43, -9, -57, -87],
    [83, 36, -36, -83, -83, -36, 36, 83, 83, 36, -36, -83, -83, -36, 36, 83],
    [80, 9, -70, -87, -25, 57, 90, 43, -43, -90, -57, 25, 87, 70, -9, -80],
    [75, -18, -89, -50, 50, 89, 18, -75, -75, 18, 89, 50, -50, -89, -18, 75],
    [70, -43, -87, 9, 90, 25, -80, -57, 57, 80, -25, -90, -9, 87, 43, -70],
    [64, -64, -64, 64, 64, -64, -64, 64, 64, -64, -64, 64, 64, -64, -64, 64],
    [57, -80, -25, 90, -9, -87, 43, 70, -70, -43, 87, 9, -90, 25, 80, -57],
    [50, -89, 18, 75, -75, -18, 89, -50, -50, 89, -18, -75, 75, 18, -89, 50],
    [43, -90, 57, 25, -87, 70, 9, -80, 80, -9, -70, 87, -25, -57, 90, -43],
    [36, -83, 83, -36, -36, 83, -83, 36, 36, -83, 83, -36, -36, 83, -83, 36],
    [25, -70, 90, -80, 43, 9, -57, 87, -87, 57, -9, -43, 80, -90, 70, -25],
    [18, -50, 75, -89, 89, -75, 50, -18, -18, 50, -75, 89, -89, 75, -50, 18],
    [9, -25, 43, -57, 70, -80, 87, -90, 90, -87, 80, -70, 57, -43, 25, -9],
];

/// Entry `(k, n)` of the `size`-point basis: every `16 / size`-th row of
/// the 16-point table, first `size` columns.
pub fn hevc(size: usize, k: usize, n: usize) -> i64 {
    HEVC16[k * (16 / size)][n] as i64
}

fn round_shift(v: i64, s: u32) -> i64 {
    (v + (1 << (s - 1))) >> s
}

/// Forward integer transform as a matrix product.
pub fn matrix_dct(x: &[i32]) -> Vec<i32> {
    let n = x.len();
    let shift = n.trailing_zeros() + 2;
    (0..n)
        .map(|k| {
            let acc: i64 = (0..n).map(|i| hevc(n, k, i) * x[i] as i64).sum();
            round_shift(acc, shift) as i32
        })
        .collect()
}

/// Inverse integer transform as a matrix product with the transpose.
pub fn matrix_idct(y: &[i32]) -> Vec<i32> {
    let n = y.len();
    (0..n)
        .map(|i| {
            let acc: i64 = (0..n).map(|k| hevc(n, k, i) * y[k] as i64).sum();
            round_shift(acc, 10) as i32
        })
        .collect()
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Name and window size of every checked-in golden file.
pub const GOLDENS: [(&str, WindowSize); 2] = [
    ("int_dct_w8.cwmf", WindowSize::W8),
    ("int_dct_w16.cwmf", WindowSize::W16),
];

/// The library stored in a golden file: a two-qubit corpus compressed to
/// MSE 1e-5.
pub fn golden_library(ws: WindowSize) -> Vec<CompressedWaveform> {
    let corpus = gen_corpus(&CorpusParams {
        qubits: 2,
        ..Default::default()
    })
    .unwrap();
    let cfg = CodecConfig::new(TransformVariant::int_dct_w(ws));
    corpus
        .iter()
        .map(|w| {
            fidelity_aware_compress(w, 1e-5, &cfg)
                .unwrap()
                .compressed
                .expect("golden corpus is solvable")
        })
        .collect()
}
