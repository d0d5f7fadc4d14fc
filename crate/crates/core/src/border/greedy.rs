//! Sequential choice of the off-diagonal border signs.
//!
//! `det(G - kD)` is affine in each single entry of `D`. With the undecided
//! entries held at 0, the current determinant is the midpoint of the two
//! values reachable by setting the next entry to `±1`, so the better choice
//! never loses ground.

use num_bigint::{BigInt, Sign};
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::det::det_exact_i64;
use crate::matrix::{Matrix, SignMatrix};

/// Visiting order of the off-diagonal positions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GreedyOrder {
    #[default]
    RowMajor,
    ColumnMajor,
}

/// Quantity maximized at each step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    #[default]
    AbsDet,
    SignedDet,
}

impl GreedyOrder {
    pub fn positions(self, d: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(d * d.saturating_sub(1));
        for a in 0..d {
            for b in 0..d {
                if a != b {
                    out.push(match self {
                        GreedyOrder::RowMajor => (a, b),
                        GreedyOrder::ColumnMajor => (b, a),
                    });
                }
            }
        }
        out
    }
}

fn cofactor(n: &Matrix<i64>, i: usize, j: usize) -> BigInt {
    let d = n.rows();
    let minor = Matrix::from_fn(d - 1, d - 1, |r, c| {
        *n.get(if r < i { r } else { r + 1 }, if c < j { c } else { c + 1 })
    });
    let m = det_exact_i64(&minor).expect("square minor");
    if (i + j) % 2 == 0 {
        m
    } else {
        -m
    }
}

/// Complete `D` (diagonal `-1`) for the Gram block `G` and weight `k`.
/// Returns `D` and `det(G - kD)`.
pub fn greedy_complete(g: &Matrix<i64>, k: u64, order: GreedyOrder, objective: Objective) -> (SignMatrix, BigInt) {
    let d = g.rows();
    assert_eq!(d, g.cols(), "Gram block must be square");
    let k = k as i64;
    let mut n = Matrix::from_fn(d, d, |i, j| *g.get(i, j) + if i == j { k } else { 0 });
    let mut positive = vec![vec![false; d]; d];
    let start = det_exact_i64(&n).expect("square");
    let mut alpha = start.clone();
    for (i, j) in order.positions(d) {
        let c = cofactor(&n, i, j);
        let plus = match objective {
            Objective::AbsDet => (&alpha * &c).sign() != Sign::Plus,
            Objective::SignedDet => c.sign() != Sign::Plus,
        };
        let x: i64 = if plus { 1 } else { -1 };
        alpha -= c * BigInt::from(k * x);
        n.set(i, j, *g.get(i, j) - k * x);
        positive[i][j] = plus;
    }
    match objective {
        Objective::AbsDet => debug_assert!(alpha.abs() >= start.abs()),
        Objective::SignedDet => debug_assert!(alpha >= start),
    }
    debug_assert_eq!(det_exact_i64(&n).unwrap(), alpha);
    (SignMatrix::from_fn(d, d, |i, j| positive[i][j]), alpha)
}
