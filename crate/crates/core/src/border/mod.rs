//! Randomized bordering of a quasi-orthogonal core.
//!
//! For a core `Q` of order `m` with `Q Q^T = k I`, a trial builds
//!
//! ```text
//!     Ã = [ Q  B ]      B: m x d random signs
//!         [ C  D ]      C = sgn(B^T Q),  D: d x d signs, diagonal -1
//! ```
//!
//! and evaluates `|det Ã| = k^{m/2} |det N| / k^d` exactly, where
//! `N = G - kD` and `G = C Q^T B` is an integer `d x d` block. Conference
//! cores put zeros on the diagonal of `Ã`; that is still a point of the cube
//! `[-1, 1]^{n x n}`, and the determinant is maximized at a vertex, so the
//! value remains a lower bound for `D(n)`.

mod greedy;
mod witness;

pub use greedy::{greedy_complete, GreedyOrder, Objective};
pub use witness::{verify_border, verify_witness, Witness};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits::PackedSigns;
use crate::construct::QuasiOrthogonal;
use crate::error::{Error, Result};
use crate::logscalar::ln_abs_bigint;
use crate::matrix::{Matrix, SignMatrix};
use crate::LogScalar;

/// Random stream of one trial: ChaCha8 keyed by the master seed, with the
/// trial index selecting the stream. Trials are independent of each other
/// and of execution order.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

/// `d` columns of `m` fair signs, filled column by column from successive
/// 64-bit words (least significant bit first, set bit = `-1`).
pub fn sample_packed_columns(rng: &mut impl RngCore, m: usize, d: usize) -> Vec<PackedSigns> {
    (0..d)
        .map(|_| PackedSigns::from_words(m, (0..m.div_ceil(64)).map(|_| rng.next_u64()).collect()))
        .collect()
}

/// `m x d` border block `B` from the trial stream.
pub fn sample_border_columns(rng: &mut impl RngCore, m: usize, d: usize) -> SignMatrix {
    let cols = sample_packed_columns(rng, m, d);
    columns_to_matrix(&cols, m)
}

fn columns_to_matrix(cols: &[PackedSigns], m: usize) -> SignMatrix {
    SignMatrix::from_fn(m, cols.len(), |i, j| cols[j].get(i) > 0)
}

fn matrix_to_columns(b: &SignMatrix) -> Vec<PackedSigns> {
    (0..b.cols()).map(|j| PackedSigns::from_fn(b.rows(), |i| b.get(i, j) < 0)).collect()
}

/// `(b^T Q)_t` for every column `t`.
fn column_products(q: &QuasiOrthogonal, b: &PackedSigns) -> Vec<i64> {
    (0..q.order()).map(|t| q.col_dot(t, b)).collect()
}

fn sgn(x: i64) -> bool {
    x >= 0
}

/// `C = sgn(B^T Q)` with `sgn(0) = +1`; `d x m`.
pub fn sign_completion(b: &SignMatrix, q: &QuasiOrthogonal) -> Result<SignMatrix> {
    check_border_shape(b, q)?;
    let cols = matrix_to_columns(b);
    let prods: Vec<Vec<i64>> = cols.iter().map(|c| column_products(q, c)).collect();
    Ok(SignMatrix::from_fn(b.cols(), q.order(), |i, t| sgn(prods[i][t])))
}

fn check_border_shape(b: &SignMatrix, q: &QuasiOrthogonal) -> Result<()> {
    if b.rows() != q.order() {
        return Err(Error::DimensionMismatch(format!(
            "border has {} rows, core has order {}",
            b.rows(),
            q.order()
        )));
    }
    Ok(())
}

/// `G = C Q^T B`, exact.
pub fn gram_block(q: &QuasiOrthogonal, b: &SignMatrix, c: &SignMatrix) -> Result<Matrix<i64>> {
    check_border_shape(b, q)?;
    let d = b.cols();
    if c.rows() != d || c.cols() != q.order() {
        return Err(Error::DimensionMismatch(format!(
            "C is {}x{}, expected {d}x{}",
            c.rows(),
            c.cols(),
            q.order()
        )));
    }
    let cols = matrix_to_columns(b);
    let prods: Vec<Vec<i64>> = cols.iter().map(|col| column_products(q, col)).collect();
    // G[i][l] = sum_t C[i][t] (b_l^T Q)_t
    Ok(Matrix::from_fn(d, d, |i, l| (0..q.order()).map(|t| c.get(i, t) as i64 * prods[l][t]).sum()))
}

/// `C Q^T`, the `d x m` block whose rows each have squared norm `k m`.
pub fn row_products(q: &QuasiOrthogonal, c: &SignMatrix) -> Matrix<i64> {
    let rows: Vec<PackedSigns> =
        (0..c.rows()).map(|i| PackedSigns::from_fn(c.cols(), |t| c.get(i, t) < 0)).collect();
    Matrix::from_fn(c.rows(), q.order(), |i, j| q.row_dot(j, &rows[i]))
}

/// Blocks of one bordered matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Border {
    pub b: SignMatrix,
    pub c: SignMatrix,
    pub d: SignMatrix,
    pub g: Matrix<i64>,
}

impl Border {
    pub fn width(&self) -> usize {
        self.d.rows()
    }

    /// Assemble the full `(m + d) x (m + d)` matrix.
    pub fn assemble(&self, q: &QuasiOrthogonal) -> Matrix<i64> {
        let m = q.order();
        Matrix::from_fn(m + self.width(), m + self.width(), |i, j| {
            (match (i < m, j < m) {
                (true, true) => q.entry(i, j),
                (true, false) => self.b.get(i, j - m),
                (false, true) => self.c.get(i - m, j),
                (false, false) => self.d.get(i - m, j - m),
            }) as i64
        })
    }
}

#[derive(Clone, Debug)]
pub struct TrialResult {
    pub n: usize,
    pub m: usize,
    pub weight: u64,
    pub trial_index: u64,
    /// `det(G - kD)`.
    pub det_n: BigInt,
    /// Lower bound on `D(n) / n^{n/2}`.
    pub ratio: LogScalar,
    pub border: Border,
}

/// `ln(|det Ã| / n^{n/2})` from the Schur factorization.
pub fn ratio_log(m: usize, d: usize, k: u64, det_n: &BigInt) -> f64 {
    let n = (m + d) as f64;
    let lk = (k as f64).ln();
    if d == 0 {
        return m as f64 / 2.0 * lk - n / 2.0 * n.ln();
    }
    m as f64 / 2.0 * lk + ln_abs_bigint(det_n) - d as f64 * lk - n / 2.0 * n.ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub trials: u64,
    pub master_seed: u64,
    pub greedy_order: GreedyOrder,
    pub objective: Objective,
    /// Largest order for which witnesses are cross-checked against a direct
    /// determinant of the assembled matrix.
    pub direct_check_limit: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            trials: 256,
            master_seed: 0,
            greedy_order: GreedyOrder::RowMajor,
            objective: Objective::AbsDet,
            direct_check_limit: 64,
        }
    }
}

/// Complete a given `B` into a full border and evaluate it.
pub fn evaluate_border(
    q: &QuasiOrthogonal,
    b: SignMatrix,
    order: GreedyOrder,
    objective: Objective,
) -> Result<(Border, BigInt)> {
    check_border_shape(&b, q)?;
    let cols = matrix_to_columns(&b);
    let (c, g) = complete_packed(q, &cols);
    let (dm, det_n) = greedy_complete(&g, q.weight(), order, objective);
    Ok((Border { b, c, d: dm, g }, det_n))
}

fn complete_packed(q: &QuasiOrthogonal, cols: &[PackedSigns]) -> (SignMatrix, Matrix<i64>) {
    let d = cols.len();
    let prods: Vec<Vec<i64>> = cols.iter().map(|col| column_products(q, col)).collect();
    let c = SignMatrix::from_fn(d, q.order(), |i, t| sgn(prods[i][t]));
    let g = Matrix::from_fn(d, d, |i, l| {
        prods[i].iter().zip(&prods[l]).map(|(&own, &other)| if own >= 0 { other } else { -other }).sum()
    });
    (c, g)
}

/// One bordering trial of width `d` on the stream `(master_seed, trial_index)`.
pub fn run_trial(q: &QuasiOrthogonal, d: usize, config: &SearchConfig, trial_index: u64) -> TrialResult {
    let m = q.order();
    let k = q.weight();
    let mut rng = trial_rng(config.master_seed, trial_index);
    let cols = sample_packed_columns(&mut rng, m, d);
    let (c, g) = complete_packed(q, &cols);
    let (dm, det_n) = greedy_complete(&g, k, config.greedy_order, config.objective);
    let ratio = LogScalar::from_parts(if det_n.is_zero() { 0 } else { 1 }, ratio_log(m, d, k, &det_n));
    TrialResult {
        n: m + d,
        m,
        weight: k,
        trial_index,
        det_n,
        ratio,
        border: Border { b: columns_to_matrix(&cols, m), c, d: dm, g },
    }
}

fn better(a: TrialResult, b: TrialResult) -> TrialResult {
    match a.det_n.abs().cmp(&b.det_n.abs()) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if a.trial_index <= b.trial_index {
                a
            } else {
                b
            }
        }
    }
}

/// Best of `config.trials` independent trials; ties go to the lowest index,
/// so the result does not depend on scheduling.
pub fn search(q: &QuasiOrthogonal, d: usize, config: &SearchConfig) -> Result<TrialResult> {
    if config.trials == 0 {
        return Err(Error::Precondition("search needs at least one trial".into()));
    }
    Ok((0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(q, d, config, t))
        .reduce_with(better)
        .expect("at least one trial"))
}

/// Every `B` in `{±1}^{m x d}` (for `m d <= 24`), completed and evaluated.
pub fn exhaustive_borders(
    q: &QuasiOrthogonal,
    d: usize,
    order: GreedyOrder,
    objective: Objective,
) -> Result<Vec<(Border, BigInt)>> {
    let m = q.order();
    if m * d > 24 {
        return Err(Error::Precondition(format!("exhaustive enumeration of {m}x{d} borders is too large")));
    }
    (0..1u64 << (m * d))
        .map(|bits| {
            let b = SignMatrix::from_fn(m, d, |i, j| bits >> (j * m + i) & 1 == 0);
            evaluate_border(q, b, order, objective)
        })
        .collect()
}

/// Best border found by exhaustive enumeration, as a trial result.
pub fn exhaustive_search(q: &QuasiOrthogonal, d: usize) -> Result<TrialResult> {
    let all = exhaustive_borders(q, d, GreedyOrder::RowMajor, Objective::AbsDet)?;
    let (index, (border, det_n)) = all
        .into_iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.abs().cmp(&b.1 .1.abs()).then(b.0.cmp(&a.0)))
        .expect("at least one border");
    let m = q.order();
    let ratio = LogScalar::from_parts(if det_n.is_zero() { 0 } else { 1 }, ratio_log(m, d, q.weight(), &det_n));
    Ok(TrialResult { n: m + d, m, weight: q.weight(), trial_index: index as u64, det_n, ratio, border })
}
