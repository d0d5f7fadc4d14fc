//! Determinants.
//!
//! Exact determinants use fraction-free (Bareiss) elimination: every
//! intermediate value is a minor of the input, so all divisions are exact and
//! no rational arithmetic is needed. The elimination is generic over
//! [`ExactInt`]; fixed-width types report overflow as `None`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{ExactInt, Real};

/// Fraction-free determinant over `T`. Returns `None` if an intermediate
/// value overflows `T`.
pub fn bareiss<T: ExactInt>(mut a: Vec<T>, n: usize) -> Option<T> {
    debug_assert_eq!(a.len(), n * n);
    if n == 0 {
        return Some(T::one());
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return Some(T::zero());
            };
            for j in 0..n {
                a.swap(k * n + j, r * n + j);
            }
            negate = !negate;
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            let lead = a[i * n + k].clone();
            for j in k + 1..n {
                let x = a[i * n + j].checked_mul(&pivot)?;
                let y = lead.checked_mul(&a[k * n + j])?;
                a[i * n + j] = x.checked_sub(&y)?.checked_div(&prev)?;
            }
            a[i * n + k] = T::zero();
        }
        prev = pivot;
    }
    let det = a[n * n - 1].clone();
    Some(if negate { -det } else { det })
}

fn require_square<T>(m: &Matrix<T>) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare { rows: m.rows(), cols: m.cols() })
    }
}

/// Exact determinant of an arbitrary-precision integer matrix.
pub fn det_exact(m: &Matrix<BigInt>) -> Result<BigInt> {
    require_square(m)?;
    Ok(bareiss(m.as_slice().to_vec(), m.rows()).expect("BigInt arithmetic cannot overflow"))
}

/// Exact determinant of a machine-integer matrix: tries `i128` first and
/// falls back to `BigInt` when an intermediate minor overflows.
pub fn det_exact_i64(m: &Matrix<i64>) -> Result<BigInt> {
    require_square(m)?;
    let n = m.rows();
    let narrow: Vec<i128> = m.as_slice().iter().map(|&v| v as i128).collect();
    if let Some(d) = bareiss(narrow, n) {
        return Ok(BigInt::from(d));
    }
    let wide: Vec<BigInt> = m.as_slice().iter().map(|&v| BigInt::from(v)).collect();
    Ok(bareiss(wide, n).expect("BigInt arithmetic cannot overflow"))
}

/// Floating-point determinant by LU with partial pivoting.
pub fn det_lu<F: Real>(m: &Matrix<F>) -> Result<F> {
    require_square(m)?;
    let n = m.rows();
    let mut a = m.as_slice().to_vec();
    let mut det = F::one();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| a[x * n + k].abs().partial_cmp(&a[y * n + k].abs()).unwrap())
            .unwrap();
        if a[p * n + k].is_zero() {
            return Ok(F::zero());
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det = det * pivot;
        for i in k + 1..n {
            let factor = a[i * n + k] / pivot;
            for j in k + 1..n {
                a[i * n + j] = a[i * n + j] - factor * a[k * n + j];
            }
        }
    }
    Ok(det)
}
