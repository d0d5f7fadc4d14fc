//! Serialized trial witnesses and their independent re-check.
//!
//! A witness stores the recipe of the core, the border block `B` and the
//! signs `D`; `C` and `G` are recomputed on load.

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{gram_block, ratio_log, sign_completion, Border, TrialResult};
use crate::construct::{Kind, QuasiOrthogonal, Recipe};
use crate::det::det_exact_i64;
use crate::error::{Error, Result};
use crate::matrix::{Matrix, SignMatrix};
use crate::LogScalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub kind: Kind,
    pub weight: u64,
    pub recipe: Recipe,
    pub master_seed: u64,
    pub trial_index: u64,
    /// Rows of `B` as `+`/`-` strings.
    #[serde(rename = "B")]
    pub b: Vec<String>,
    /// Rows of `D` as `+`/`-` strings; the diagonal is always `-`.
    #[serde(rename = "D")]
    pub d_signs: Vec<String>,
    /// `|det(G - kD)|` in decimal.
    pub det_n: String,
    pub ratio_log: f64,
    pub ratio_decimal: f64,
}

impl Witness {
    pub fn from_trial(result: &TrialResult, q: &QuasiOrthogonal, master_seed: u64) -> Result<Witness> {
        let recipe = q
            .recipe()
            .cloned()
            .ok_or_else(|| Error::Precondition("witness needs a core built from a recipe".into()))?;
        Ok(Witness {
            n: result.n,
            m: result.m,
            d: result.border.width(),
            kind: q.kind(),
            weight: q.weight(),
            recipe,
            master_seed,
            trial_index: result.trial_index,
            b: result.border.b.to_row_strings(),
            d_signs: result.border.d.to_row_strings(),
            det_n: result.det_n.abs().to_string(),
            ratio_log: result.ratio.log_abs(),
            ratio_decimal: result.ratio.value(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("witness serializes")
    }

    pub fn from_json(text: &str) -> Result<Witness> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Witness> {
        Witness::from_json(&fs::read_to_string(path)?)
    }
}

fn corrupt(why: impl Into<String>) -> Error {
    Error::WitnessCorrupt(why.into())
}

/// Re-derive `C` and `G` from `B`, check them against the stored blocks,
/// and recompute `det(G - kD)`. For orders up to `direct_check_limit` the
/// assembled matrix is also checked against the Schur identity
/// `det(Ã)^2 k^{2d} = k^m det(N)^2`.
pub fn verify_border(q: &QuasiOrthogonal, border: &Border, direct_check_limit: usize) -> Result<BigInt> {
    let d = border.width();
    let m = q.order();
    let c = sign_completion(&border.b, q)?;
    if c != border.c {
        return Err(corrupt("stored C differs from sgn(B^T Q)"));
    }
    let g = gram_block(q, &border.b, &c)?;
    if g != border.g {
        return Err(corrupt("stored Gram block differs from C Q^T B"));
    }
    if border.d.rows() != d || border.d.cols() != d || (0..d).any(|i| border.d.get(i, i) != -1) {
        return Err(corrupt("D must be square with diagonal -1"));
    }
    let k = q.weight() as i64;
    let nmat = Matrix::from_fn(d, d, |i, j| g.get(i, j) - k * border.d.get(i, j) as i64);
    let det_n = det_exact_i64(&nmat)?;
    if m + d <= direct_check_limit {
        let direct = det_exact_i64(&border.assemble(q))?;
        let kb = BigInt::from(k);
        let lhs = &direct * &direct * kb.pow(2 * d as u32);
        let rhs = kb.pow(m as u32) * &det_n * &det_n;
        if lhs != rhs {
            return Err(Error::InternalConsistency(format!(
                "direct determinant {direct} disagrees with Schur value {det_n}"
            )));
        }
    }
    Ok(det_n)
}

/// Rebuild everything a witness claims and return the certified ratio.
pub fn verify_witness(w: &Witness, direct_check_limit: usize) -> Result<LogScalar> {
    if w.n != w.m + w.d {
        return Err(corrupt(format!("n = {} but m + d = {}", w.n, w.m + w.d)));
    }
    if w.recipe.order() != w.m as u64 || w.recipe.kind() != w.kind {
        return Err(corrupt("recipe does not match the stored order or kind"));
    }
    let q = w.recipe.build()?;
    if !q.validate() {
        return Err(Error::InternalConsistency(format!("{} fails Q Q^T = k I", w.recipe)));
    }
    if q.weight() != w.weight {
        return Err(corrupt("stored weight does not match the core"));
    }
    let b = SignMatrix::from_row_strings(&w.b).map_err(|e| corrupt(format!("B: {e}")))?;
    let dm = SignMatrix::from_row_strings(&w.d_signs).map_err(|e| corrupt(format!("D: {e}")))?;
    if b.rows() != w.m || (w.m > 0 && b.cols() != w.d) {
        return Err(corrupt(format!("B is {}x{}, expected {}x{}", b.rows(), b.cols(), w.m, w.d)));
    }
    let b = if w.d == 0 { SignMatrix::from_fn(w.m, 0, |_, _| true) } else { b };
    let c = sign_completion(&b, &q)?;
    let g = gram_block(&q, &b, &c)?;
    let border = Border { b, c, d: dm, g };
    let det_n = verify_border(&q, &border, direct_check_limit)?;
    if det_n.abs().to_string() != w.det_n {
        return Err(corrupt(format!("recomputed |det N| = {} differs from stored {}", det_n.abs(), w.det_n)));
    }
    let log = ratio_log(w.m, w.d, w.weight, &det_n);
    if (log - w.ratio_log).abs() > 1e-9 {
        return Err(corrupt(format!("recomputed ratio log {log} differs from stored {}", w.ratio_log)));
    }
    Ok(LogScalar::from_parts(if det_n.sign() == num_bigint::Sign::NoSign { 0 } else { 1 }, log))
}
