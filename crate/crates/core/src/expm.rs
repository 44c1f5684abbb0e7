//! Matrix exponential by scaling and squaring with a degree-13 Padé approximant.
//!
//! The scaling parameter is chosen from the 1-norm so that
//! `||A / 2^s||_1 <= theta_13`, which keeps the backward error of the
//! approximant at unit roundoff for double precision.

use crate::error::Result;
use crate::lu::solve;
use crate::matrix::CMatrix;
use crate::scalar::Real;

const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371_920_351_148_152;

/// `exp(A)` for a square, finite matrix. `exp(0)` is returned as the exact identity.
pub fn mat_exp<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    a.ensure_square()?;
    a.ensure_finite("mat_exp input")?;
    let n = a.dim();
    if a.max_abs() == T::zero() {
        return Ok(CMatrix::identity(n));
    }

    let norm = a.norm_1().to_f64().unwrap_or(f64::INFINITY);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale_real(T::of(2f64.powi(-s)));

    let b = |k: usize| T::of(PADE13[k]);
    let eye = CMatrix::identity(n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let lin = |terms: &[(&CMatrix<T>, usize)]| {
        let mut acc = CMatrix::zeros(n, n);
        for (m, k) in terms {
            acc += &m.scale_real(b(*k));
        }
        acc
    };

    let w1 = lin(&[(&a6, 13), (&a4, 11), (&a2, 9)]);
    let w2 = &(&a6 * &w1) + &lin(&[(&a6, 7), (&a4, 5), (&a2, 3), (&eye, 1)]);
    let u = &scaled * &w2;
    let z1 = lin(&[(&a6, 12), (&a4, 10), (&a2, 8)]);
    let v = &(&a6 * &z1) + &lin(&[(&a6, 6), (&a4, 4), (&a2, 2), (&eye, 0)]);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = solve(&q, &p)?;
    for _ in 0..s {
        r = &r * &r;
    }
    r.ensure_finite("mat_exp result")?;
    Ok(r)
}
