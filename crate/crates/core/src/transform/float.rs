use std::f64::consts::PI;

use super::{window_count, CoefficientWindow, OpCounter, WindowSize};
use crate::error::{Error, Result};

/// `cos(pi * m / (2N))` for `m` in `0..4N`; the DCT kernel only ever needs
/// these angles since `(2n + 1) k` can be reduced modulo `4N`.
fn cosine_table(n: usize) -> Vec<f64> {
    (0..4 * n)
        .map(|m| (PI * m as f64 / (2 * n) as f64).cos())
        .collect()
}

fn weights(n: usize) -> (f64, f64) {
    ((1.0 / n as f64).sqrt(), (2.0 / n as f64).sqrt())
}

/// Orthonormal DCT-II of `x`.
pub fn dct_n(x: &[f64]) -> Result<Vec<f64>> {
    dct_n_counted(x, &mut OpCounter::default())
}

/// Orthonormal DCT-III of `y`; the inverse of [`dct_n`].
pub fn idct_n(y: &[f64]) -> Result<Vec<f64>> {
    idct_n_counted(y, &mut OpCounter::default())
}

pub fn dct_n_counted(x: &[f64], ops: &mut OpCounter) -> Result<Vec<f64>> {
    let n = x.len();
    if n == 0 {
        return Err(Error::Shape {
            expected: 1,
            actual: 0,
        });
    }
    let table = cosine_table(n);
    let (dc, ac) = weights(n);
    let out = (0..n)
        .map(|k| {
            let mut acc = 0.0;
            for (i, &v) in x.iter().enumerate() {
                acc += v * table[((2 * i + 1) * k) % (4 * n)];
            }
            acc * if k == 0 { dc } else { ac }
        })
        .collect();
    let n = n as u64;
    ops.multiplies += n * n + n;
    ops.adds += n * (n - 1);
    Ok(out)
}

pub fn idct_n_counted(y: &[f64], ops: &mut OpCounter) -> Result<Vec<f64>> {
    let n = y.len();
    if n == 0 {
        return Err(Error::Shape {
            expected: 1,
            actual: 0,
        });
    }
    let table = cosine_table(n);
    let (dc, ac) = weights(n);
    let out = (0..n)
        .map(|i| {
            let mut acc = y[0] * dc;
            for (k, &v) in y.iter().enumerate().skip(1) {
                acc += v * ac * table[((2 * i + 1) * k) % (4 * n)];
            }
            acc
        })
        .collect();
    let n = n as u64;
    ops.multiplies += n * (2 * n - 1);
    ops.adds += n * (n - 1);
    Ok(out)
}

/// Splits `x` into windows of `window_size` samples, zero-padding the last
/// one, and transforms each window independently.
pub fn dct_w(x: &[f64], window_size: WindowSize) -> Vec<CoefficientWindow<f64>> {
    let ws = window_size.get();
    let mut buf = vec![0.0; ws];
    (0..window_count(x.len(), ws))
        .map(|w| {
            let chunk = &x[w * ws..x.len().min((w + 1) * ws)];
            buf.fill(0.0);
            buf[..chunk.len()].copy_from_slice(chunk);
            CoefficientWindow {
                values: dct_n(&buf).expect("window is non-empty"),
                scale: 1,
            }
        })
        .collect()
}

/// Inverts [`dct_w`] and truncates the result to `original_length` samples.
pub fn idct_w(windows: &[CoefficientWindow<f64>], original_length: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(windows.iter().map(|w| w.values.len()).sum());
    for w in windows {
        out.extend(idct_n(&w.values)?);
    }
    if out.len() < original_length {
        return Err(Error::Shape {
            expected: original_length,
            actual: out.len(),
        });
    }
    out.truncate(original_length);
    Ok(out)
}
