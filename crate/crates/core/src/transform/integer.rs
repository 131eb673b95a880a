//! HEVC core-transform integer DCT, evaluated without multipliers.
//!
//! The 16-point basis `C` approximates `64 * sqrt(N) * T` for the
//! orthonormal DCT matrix `T`; the 8-point basis is its even rows
//! restricted to the first eight columns. Both directions run a recursive
//! partial butterfly: the even outputs are the half-size transform of the
//! folded sums and the odd outputs are short dot products with the folded
//! differences. Every constant product is expanded into canonical signed
//! digits and computed with shifts and adds.
//!
//! Scaling: inputs carry the factor `S`, the forward pass shifts right by
//! `log2(N) + 2` and the inverse by [`COEFF_FRAC_BITS`]. Coefficients then
//! hold orthonormal DCT values with `COEFF_FRAC_BITS` fractional bits, and
//! the inverse returns samples at the original scale `S`.

use super::{window_count, CoefficientWindow, OpCounter, WindowSize};
use crate::error::{Error, Result};

/// Fractional bits carried by integer coefficients.
pub const COEFF_FRAC_BITS: u32 = 10;

/// Largest coefficient magnitude accepted by the inverse transform.
const MAX_COEFF: i64 = 1 << 24;

/// Basis constant for the angle `a * pi / 32`, `a` in `1..=16`.
const ANGLE: [i32; 17] = [0, 90, 89, 87, 83, 80, 75, 70, 64, 57, 50, 43, 36, 25, 18, 9, 0];

const fn basis16() -> [[i32; 16]; 16] {
    let mut m = [[0; 16]; 16];
    let mut k = 0;
    while k < 16 {
        let mut n = 0;
        while n < 16 {
            m[k][n] = if k == 0 {
                64
            } else {
                let mut a = ((2 * n + 1) * k) % 64;
                if a > 32 {
                    a = 64 - a;
                }
                if a > 16 {
                    -ANGLE[32 - a]
                } else {
                    ANGLE[a]
                }
            };
            n += 1;
        }
        k += 1;
    }
    m
}

static C16: [[i32; 16]; 16] = basis16();

/// Entry `(k, n)` of the `n`-point basis, `n` a power of two up to 16.
fn coeff(size: usize, k: usize, n: usize) -> i32 {
    C16[k * (16 / size)][n]
}

/// The `window_size`-point integer basis as row vectors.
pub fn basis_matrix(window_size: WindowSize) -> Vec<Vec<i32>> {
    let n = window_size.get();
    (0..n)
        .map(|k| (0..n).map(|i| coeff(n, k, i)).collect())
        .collect()
}

/// Non-zero digits of `c` in canonical signed-digit form, as
/// `(shift, negative)` pairs from least to most significant.
fn csd(mut c: u32) -> Vec<(u32, bool)> {
    let mut digits = Vec::new();
    let mut shift = 0;
    while c != 0 {
        if c & 1 == 1 {
            // Digit -1 when the next bit is also set, so runs of ones collapse.
            if c & 2 == 2 {
                digits.push((shift, true));
                c += 1;
            } else {
                digits.push((shift, false));
                c -= 1;
            }
        }
        c >>= 1;
        shift += 1;
    }
    digits
}

/// `|c| * x` by shifts and adds.
fn mul_abs(x: i64, c: i32, ops: &mut OpCounter) -> i64 {
    let mut acc: Option<i64> = None;
    for (shift, negative) in csd(c.unsigned_abs()) {
        let term = if shift == 0 {
            x
        } else {
            ops.shifts += 1;
            x << shift
        };
        acc = Some(match acc {
            None if negative => {
                ops.adds += 1;
                -term
            }
            None => term,
            Some(a) => {
                ops.adds += 1;
                if negative {
                    a - term
                } else {
                    a + term
                }
            }
        });
    }
    acc.unwrap_or(0)
}

/// `sum(c[i] * x[i])` by shifts and adds.
fn dot(c: impl Iterator<Item = i32>, x: impl Iterator<Item = i64>, ops: &mut OpCounter) -> i64 {
    let mut acc: Option<i64> = None;
    for (c, x) in c.zip(x) {
        if c == 0 {
            continue;
        }
        let p = mul_abs(x, c, ops);
        acc = Some(match acc {
            None if c < 0 => {
                ops.adds += 1;
                -p
            }
            None => p,
            Some(a) => {
                ops.adds += 1;
                if c < 0 {
                    a - p
                } else {
                    a + p
                }
            }
        });
    }
    acc.unwrap_or(0)
}

/// `C * x` for the `x.len()`-point basis.
fn forward(x: &[i64], ops: &mut OpCounter) -> Vec<i64> {
    let n = x.len();
    if n == 1 {
        return vec![mul_abs(x[0], 64, ops)];
    }
    let half = n / 2;
    let even: Vec<i64> = (0..half).map(|i| x[i] + x[n - 1 - i]).collect();
    let odd: Vec<i64> = (0..half).map(|i| x[i] - x[n - 1 - i]).collect();
    ops.adds += n as u64;

    let even_out = forward(&even, ops);
    let mut y = vec![0; n];
    for (k, v) in even_out.into_iter().enumerate() {
        y[2 * k] = v;
    }
    for k in 0..half {
        let row = 2 * k + 1;
        y[row] = dot((0..half).map(|i| coeff(n, row, i)), odd.iter().copied(), ops);
    }
    y
}

/// `C^T * y` for the `y.len()`-point basis.
fn inverse(y: &[i64], ops: &mut OpCounter) -> Vec<i64> {
    let n = y.len();
    if n == 1 {
        return vec![mul_abs(y[0], 64, ops)];
    }
    let half = n / 2;
    let even_in: Vec<i64> = y.iter().step_by(2).copied().collect();
    let e = inverse(&even_in, ops);
    let mut x = vec![0; n];
    for i in 0..half {
        let o = dot(
            (0..half).map(|k| coeff(n, 2 * k + 1, i)),
            y.iter().skip(1).step_by(2).copied(),
            ops,
        );
        x[i] = e[i] + o;
        x[n - 1 - i] = e[i] - o;
    }
    ops.adds += n as u64;
    x
}

fn round_shift(v: i64, shift: u32, ops: &mut OpCounter) -> i64 {
    ops.adds += 1;
    ops.shifts += 1;
    (v + (1 << (shift - 1))) >> shift
}

/// Transforms one window of scaled samples. Every sample must fit in 16
/// signed bits.
pub fn int_dct_window(x: &[i32], ops: &mut OpCounter) -> Result<Vec<i32>> {
    let ws = WindowSize::try_from(x.len())?;
    let mut wide = Vec::with_capacity(x.len());
    for (index, &v) in x.iter().enumerate() {
        if v < i16::MIN as i32 || v > i16::MAX as i32 {
            return Err(Error::Range {
                index,
                value: v as i64,
                bits: 16,
            });
        }
        wide.push(v as i64);
    }
    let shift = ws.log2() + 2;
    Ok(forward(&wide, ops)
        .into_iter()
        .map(|v| round_shift(v, shift, ops) as i32)
        .collect())
}

/// Inverts one coefficient window, returning samples at the input scale.
pub fn int_idct_window(y: &[i32], ops: &mut OpCounter) -> Result<Vec<i32>> {
    WindowSize::try_from(y.len())?;
    if let Some((index, &v)) = y
        .iter()
        .enumerate()
        .find(|(_, &v)| (v as i64).abs() >= MAX_COEFF)
    {
        return Err(Error::Range {
            index,
            value: v as i64,
            bits: 25,
        });
    }
    let wide: Vec<i64> = y.iter().map(|&v| v as i64).collect();
    inverse(&wide, ops)
        .into_iter()
        .enumerate()
        .map(|(index, v)| {
            let v = round_shift(v, COEFF_FRAC_BITS, ops);
            i32::try_from(v).map_err(|_| Error::Range {
                index,
                value: v,
                bits: 32,
            })
        })
        .collect()
}

/// Windowed integer DCT of a channel already scaled by `window_size.scale()`.
/// The last window is zero-padded.
pub fn int_dct_w(
    x: &[i32],
    window_size: WindowSize,
) -> Result<(Vec<CoefficientWindow<i32>>, OpCounter)> {
    let ws = window_size.get();
    let mut ops = OpCounter::default();
    let mut buf = vec![0; ws];
    let mut out = Vec::with_capacity(window_count(x.len(), ws));
    for w in 0..window_count(x.len(), ws) {
        let chunk = &x[w * ws..x.len().min((w + 1) * ws)];
        buf.fill(0);
        buf[..chunk.len()].copy_from_slice(chunk);
        let values = int_dct_window(&buf, &mut ops).map_err(|e| match e {
            Error::Range { index, value, bits } => Error::Range {
                index: w * ws + index,
                value,
                bits,
            },
            other => other,
        })?;
        out.push(CoefficientWindow {
            values,
            scale: window_size.scale(),
        });
    }
    Ok((out, ops))
}

/// Inverse of one integer coefficient window.
pub fn int_idct_w(y: &CoefficientWindow<i32>) -> Result<(Vec<i32>, OpCounter)> {
    let mut ops = OpCounter::default();
    let x = int_idct_window(&y.values, &mut ops)?;
    Ok((x, ops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const HEVC8: [[i32; 8]; 8] = [
        [64, 64, 64, 64, 64, 64, 64, 64],
        [89, 75, 50, 18, -18, -50, -75, -89],
        [83, 36, -36, -83, -83, -36, 36, 83],
        [75, -18, -89, -50, 50, 89, 18, -75],
        [64, -64, -64, 64, 64, -64, -64, 64],
        [50, -89, 18, 75, -75, -18, 89, -50],
        [36, -83, 83, -36, -36, 83, -83, 36],
        [18, -50, 75, -89, 89, -75, 50, -18],
    ];

    #[test]
    fn basis_matches_published_tables() {
        let m = basis_matrix(WindowSize::W8);
        for k in 0..8 {
            assert_eq!(m[k], HEVC8[k].to_vec());
        }
        let m = basis_matrix(WindowSize::W16);
        assert_eq!(m[1], vec![90, 87, 80, 70, 57, 43, 25, 9, -9, -25, -43, -57, -70, -80, -87, -90]);
        assert_eq!(m[15], vec![9, -25, 43, -57, 70, -80, 87, -90, 90, -87, 80, -70, 57, -43, 25, -9]);
    }

    #[test]
    fn csd_reconstructs_every_constant() {
        for c in 0..=128u32 {
            let v: i64 = csd(c)
                .iter()
                .map(|&(s, neg)| if neg { -(1i64 << s) } else { 1i64 << s })
                .sum();
            assert_eq!(v, c as i64);
        }
        assert_eq!(csd(64).len(), 1);
        assert_eq!(csd(90).len(), 4); // 128 - 32 - 8 + 2
    }

    #[test]
    fn products_match_multiplication() {
        let mut ops = OpCounter::default();
        for c in [-90, -64, -9, 0, 1, 18, 36, 57, 83, 89] {
            for x in [-32768i64, -7, 0, 1, 12345] {
                let p = dot([c].into_iter(), [x].into_iter(), &mut ops);
                assert_eq!(p, c as i64 * x);
            }
        }
        assert_eq!(ops.multiplies, 0);
    }

    #[test]
    fn butterfly_matches_matrix_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for ws in [WindowSize::W8, WindowSize::W16] {
            let m = basis_matrix(ws);
            let n = ws.get();
            for _ in 0..200 {
                let x: Vec<i64> = (0..n).map(|_| rng.random_range(-32768..32768)).collect();
                let mut ops = OpCounter::default();
                let want: Vec<i64> =
                    (0..n).map(|k| (0..n).map(|i| m[k][i] as i64 * x[i]).sum()).collect();
                assert_eq!(forward(&x, &mut ops), want);
                let want_t: Vec<i64> =
                    (0..n).map(|i| (0..n).map(|k| m[k][i] as i64 * x[k]).sum()).collect();
                assert_eq!(inverse(&x, &mut ops), want_t);
                assert_eq!(ops.multiplies, 0);
            }
        }
    }

    #[test]
    fn zero_window_stays_zero() {
        for ws in [WindowSize::W8, WindowSize::W16] {
            let mut ops = OpCounter::default();
            let y = int_dct_window(&vec![0; ws.get()], &mut ops).unwrap();
            assert!(y.iter().all(|&v| v == 0));
            assert!(int_idct_window(&y, &mut ops).unwrap().iter().all(|&v| v == 0));
            assert_eq!(ops.multiplies, 0);
        }
    }

    #[test]
    fn out_of_range_samples_are_rejected() {
        let mut x = vec![0; 8];
        x[5] = 40_000;
        match int_dct_window(&x, &mut OpCounter::default()) {
            Err(Error::Range { index, .. }) => assert_eq!(index, 5),
            other => panic!("{other:?}"),
        }
        let mut long = vec![0; 20];
        long[17] = -40_000;
        match int_dct_w(&long, WindowSize::W8) {
            Err(Error::Range { index, .. }) => assert_eq!(index, 17),
            other => panic!("{other:?}"),
        }
        assert!(int_dct_window(&[0; 32], &mut OpCounter::default()).is_err());
    }

    #[test]
    fn dc_of_scaled_constant_is_orthonormal() {
        // A constant 0.5 at S = 256 has orthonormal DC 0.5 * 4 = 2.0.
        let (w, _) = int_dct_w(&[128; 16], WindowSize::W16).unwrap();
        assert_eq!(w[0].values[0], 2 << COEFF_FRAC_BITS);
        assert!(w[0].values[1..].iter().all(|&v| v == 0));
        let (x, _) = int_idct_w(&w[0]).unwrap();
        assert_eq!(x, vec![128; 16]);
    }

    #[test]
    fn per_window_op_census_is_data_independent() {
        let mut a = OpCounter::default();
        let mut b = OpCounter::default();
        int_dct_window(&[0; 8], &mut a).unwrap();
        int_dct_window(&[1, -5, 300, 7, 0, 0, 2, 9], &mut b).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.multiplies, 0);
        assert!(a.adds > 0 && a.shifts > 0);
    }
}
