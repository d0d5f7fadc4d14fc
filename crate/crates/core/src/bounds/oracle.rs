//! Exhaustive `D(n)` for tiny orders.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest order the oracle accepts. Order 6 means `2^25` determinants.
pub const ORACLE_MAX_ORDER: usize = 6;

const PREFIX_BITS: u32 = 10;

fn small_det(a: &mut [i64; 36], n: usize) -> i64 {
    let mut sign = 1;
    let mut prev = 1;
    for k in 0..n.saturating_sub(1) {
        if a[k * n + k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i * n + k] != 0) else { return 0 };
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            for j in k + 1..n {
                a[i * n + j] = (pivot * a[i * n + j] - a[i * n + k] * a[k * n + j]) / prev;
            }
        }
        prev = pivot;
    }
    sign * a[(n - 1) * n + n - 1]
}

/// `D(n)`: the maximum of `|det A|` over `n x n` sign matrices, found by
/// enumerating all matrices whose first row and column are `+1`. Negating
/// rows or columns preserves `|det|`, so nothing is lost.
pub fn maxdet_oracle(n: usize) -> Result<u64> {
    if n == 0 || n > ORACLE_MAX_ORDER {
        return Err(Error::Precondition(format!("oracle covers 1 <= n <= {ORACLE_MAX_ORDER}, got {n}")));
    }
    let free = ((n - 1) * (n - 1)) as u32;
    let prefix = free.min(PREFIX_BITS);
    let rest = free - prefix;
    let best = (0..1u64 << prefix)
        .into_par_iter()
        .map(|hi| {
            let mut best = 0i64;
            for lo in 0..1u64 << rest {
                let bits = hi << rest | lo;
                let mut a = [1i64; 36];
                for i in 1..n {
                    for j in 1..n {
                        if bits >> ((i - 1) * (n - 1) + j - 1) & 1 == 1 {
                            a[i * n + j] = -1;
                        }
                    }
                }
                best = best.max(small_det(&mut a, n).abs());
            }
            best
        })
        .max()
        .unwrap_or(0);
    Ok(best as u64)
}
