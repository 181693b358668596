//! Matrix exponential via scaling-and-squaring with a degree-13 Padé approximant.
//!
//! Generic over [`Scalar`], so a [`crate::scalar::Dual`] matrix flows through the
//! same arithmetic and comes back with the directional derivative of `e^M`.
//! The scaling exponent is chosen from the value part alone, which keeps the
//! value path identical to the plain complex evaluation.

use crate::matrix::{Matrix, MatrixError};
use crate::scalar::Scalar;

/// 1-norm above which the argument is halved before the Padé step.
pub const SQUARING_THRESHOLD: f64 = 5.37;

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

/// `e^M` for a square matrix with finite entries.
pub fn matexp<S: Scalar>(m: &Matrix<S>) -> Result<Matrix<S>, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare {
            op: "exp",
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_finite() {
        return Err(MatrixError::NonFinite);
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }

    let norm = m.norm1();
    let squarings = if norm > SQUARING_THRESHOLD {
        (norm / SQUARING_THRESHOLD).log2().ceil().max(0.0) as u32
    } else {
        0
    };
    let a = if squarings > 0 {
        m.scale(S::real(0.5f64.powi(squarings as i32)))
    } else {
        m.clone()
    };

    let b = |k: usize| S::real(PADE13[k]);
    let id = Matrix::<S>::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &(&a6.scale(b(13)) + &a4.scale(b(11))) + &a2.scale(b(9));
    let u_tail = &(&(&a6.scale(b(7)) + &a4.scale(b(5))) + &a2.scale(b(3))) + &id.scale(b(1));
    let u = &a * &(&(&a6 * &u_inner) + &u_tail);

    let v_inner = &(&a6.scale(b(12)) + &a4.scale(b(10))) + &a2.scale(b(8));
    let v_tail = &(&(&a6.scale(b(6)) + &a4.scale(b(4))) + &a2.scale(b(2))) + &id.scale(b(0));
    let v = &(&a6 * &v_inner) + &v_tail;

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.solve(&p)?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    if !r.is_finite() {
        return Err(MatrixError::NonFinite);
    }
    Ok(r)
}
