//! Closed-form lower bounds on `D(n)` for `n = h + d`, where `h` is a
//! Hadamard order, together with a brute-force oracle for tiny `n` and
//! numerical checkers for the supporting inequalities.
//!
//! Every bound is evaluated in double precision on the log scale. Bounds
//! are stated against one of three normalizations (see [`Target`]); each
//! entry also carries the equivalent lower bound on `ln D̄(n)`.

mod lemmas;
mod oracle;

pub use lemmas::{
    binomial_bound_holds, check_assorted, ASSORTED_NAMES, check_es152, check_exp_ineq, check_ineq1, check_pert_bound,
    check_uncond2, g_bound_holds, hoeffding_bound, run_lemma_suite, schur_moments, Check, LemmaReport, LemmaTally,
    PertVariant, SchurMoments, SuiteOptions,
};
pub use oracle::{maxdet_oracle, ORACLE_MAX_ORDER};

use std::f64::consts::{E, PI};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::LogScalar;

/// `sqrt(2 / pi)`.
pub const C: f64 = 0.797_884_560_802_865_4;

/// Upper bound on the best constant for `d = 1`: `D̄(9) = 7 * 2^11 / 3^9`.
pub const KAPPA1_UPPER: f64 = 7.0 * 2048.0 / 19683.0;
/// Upper bound on the best constant for `d = 2`: `2 / e`.
pub const KAPPA2_UPPER: f64 = 2.0 / E;
/// Upper bound on the best constant for `d = 3`: `D̄(11) = 5 * 2^16 / 11^{11/2}`.
pub fn kappa3_upper() -> f64 {
    5.0 * 65536.0 / 11f64.powf(5.5)
}

/// Conjectured floor `D̄(n) >= 1/2`, shown in reports for reference only.
pub const CONJECTURED_FLOOR: f64 = 0.5;

/// `g(h) = 1 + 2^{-h} h binom(h, h/2)`, exactly.
pub fn g_of_h(h: u64) -> Result<BigRational> {
    if h < 2 || h % 2 == 1 {
        return Err(Error::Precondition(format!("g(h) needs an even h >= 2, got {h}")));
    }
    let num = BigInt::from(h) * central_binomial(h / 2);
    let den = BigInt::one() << h;
    Ok(BigRational::one() + BigRational::new(num, den))
}

fn central_binomial(half: u64) -> BigInt {
    let mut b = BigInt::one();
    for i in 0..half {
        b = b * (2 * half - i) / (i + 1);
    }
    b
}

/// `binom(h, h/2) / 2^h` in floating point, as a running product.
pub fn central_binomial_ratio(h: u64) -> f64 {
    (1..=h / 2).map(|i| (2 * i - 1) as f64 / (2 * i) as f64).product()
}

/// `g(h)` in floating point.
pub fn g_of_h_f64(h: u64) -> f64 {
    1.0 + h as f64 * central_binomial_ratio(h)
}

/// `h0(d) = (e (pi/2)^{d/2} (d-1)! + d)^2`.
pub fn h0(d: u64) -> Result<f64> {
    if d == 0 {
        return Err(Error::Precondition("h0(d) needs d >= 1".into()));
    }
    let fact: f64 = (1..d).map(|i| i as f64).product();
    Ok((E * (PI / 2.0).powf(d as f64 / 2.0) * fact + d as f64).powi(2))
}

/// `sqrt(4 d ln h / h)`.
pub fn epsilon(h: u64, d: u64) -> f64 {
    (4.0 * d as f64 * (h as f64).ln() / h as f64).sqrt()
}

/// `6 d^3 / h`.
pub fn delta(h: u64, d: u64) -> f64 {
    6.0 * (d as f64).powi(3) / h as f64
}

/// `16 d^3 <= h / ln h` together with `h >= 656`.
pub fn log_condition_holds(h: u64, d: u64) -> bool {
    h >= 656 && 16.0 * (d as f64).powi(3) <= h as f64 / (h as f64).ln()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundContext {
    pub n: u64,
    pub h: u64,
    pub d: u64,
    pub epsilon: f64,
    pub delta: f64,
    pub c: f64,
    /// `g(h)`, for even `h`.
    pub g_h: Option<f64>,
    /// `h0(d)`, for `d >= 1`.
    pub h0_d: Option<f64>,
}

/// Quantity a bound is stated against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Target {
    #[serde(rename = "D(n)/h^(h/2)")]
    PerCoreHalf,
    #[serde(rename = "D(n)/h^(n/2)")]
    PerCoreFull,
    #[serde(rename = "Dbar(n)")]
    Normalized,
}

impl Target {
    pub fn as_str(self) -> &'static str {
        match self {
            Target::PerCoreHalf => "D(n)/h^(h/2)",
            Target::PerCoreFull => "D(n)/h^(n/2)",
            Target::Normalized => "Dbar(n)",
        }
    }

    /// Shift taking `ln(bound on this target)` to `ln(bound on D̄(n))`.
    fn to_normalized(self, n: u64, h: u64) -> f64 {
        let (nf, hf) = (n as f64, h as f64);
        match self {
            Target::PerCoreHalf => hf / 2.0 * hf.ln() - nf / 2.0 * nf.ln(),
            Target::PerCoreFull => nf / 2.0 * (hf.ln() - nf.ln()),
            Target::Normalized => 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundEntry {
    pub name: &'static str,
    pub applicable: bool,
    pub applicability_reason: String,
    pub target: Target,
    /// Natural log of the bound; absent when not applicable.
    pub value_log: Option<f64>,
    /// The same bound expressed on `ln D̄(n)`.
    pub normalized_log: Option<f64>,
}

impl BoundEntry {
    pub fn value(&self) -> Option<LogScalar> {
        self.value_log.map(|l| LogScalar::from_parts(1, l))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub context: BoundContext,
    pub entries: Vec<BoundEntry>,
    pub conjectured_floor: f64,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    name: &'a str,
    applicable: bool,
    target: &'a str,
    value_log: Option<f64>,
    value_decimal: Option<f64>,
}

impl BoundReport {
    pub fn entry(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Applicable entry with the largest implied bound on `D̄(n)`.
    pub fn best_normalized(&self) -> Option<&BoundEntry> {
        self.entries
            .iter()
            .filter(|e| e.normalized_log.is_some())
            .max_by(|a, b| a.normalized_log.partial_cmp(&b.normalized_log).unwrap())
    }

    /// Columns: name, applicable, target, value_log, value_decimal.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for e in &self.entries {
            w.serialize(CsvRow {
                name: e.name,
                applicable: e.applicable,
                target: e.target.as_str(),
                value_log: e.value_log,
                value_decimal: e.value_log.map(f64::exp),
            })
            .map_err(|err| Error::InternalConsistency(err.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|err| Error::InternalConsistency(err.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

struct Builder {
    n: u64,
    h: u64,
    entries: Vec<BoundEntry>,
}

impl Builder {
    fn push(&mut self, name: &'static str, target: Target, applicable: bool, reason: String, log: impl FnOnce() -> f64) {
        let value_log = applicable.then(log);
        self.entries.push(BoundEntry {
            name,
            applicable,
            applicability_reason: reason,
            target,
            value_log,
            normalized_log: value_log.map(|v| v + target.to_normalized(self.n, self.h)),
        });
    }
}

/// Evaluate every closed-form bound at `n = h + d`.
pub fn evaluate_bounds(n: u64, h: u64, d: u64) -> Result<BoundReport> {
    if h.checked_add(d) != Some(n) {
        return Err(Error::Precondition(format!("n = {n} is not h + d = {h} + {d}")));
    }
    if h == 0 {
        return Err(Error::Precondition("h must be positive".into()));
    }
    let eps = epsilon(h, d);
    let del = delta(h, d);
    let h0_d = h0(d).ok();
    let context = BoundContext {
        n,
        h,
        d,
        epsilon: eps,
        delta: del,
        c: C,
        g_h: (h % 2 == 0).then(|| g_of_h_f64(h)),
        h0_d,
    };
    let (nf, df) = (n as f64, d as f64);
    let half_log_2_over_pi_e = 0.5 * (2.0 / (PI * E)).ln();
    let mut b = Builder { n, h, entries: Vec::new() };

    b.push("hadamard", Target::Normalized, d == 0, format!("d = {d}"), || 0.0);

    let large_h = h0_d.is_some_and(|v| h as f64 >= v);
    let reason = match h0_d {
        Some(v) => format!("h = {h} {} h0({d}) = {v:.3}", if large_h { ">=" } else { "<" }),
        None => "needs d >= 1".into(),
    };
    let per_core = || df / 2.0 * (2.0 * nf / PI).ln();
    b.push("large_h", Target::PerCoreHalf, large_h, reason.clone(), per_core);
    b.push("large_h_normalized", Target::Normalized, large_h, reason, || df * half_log_2_over_pi_e);

    let small_d = (1..=3).contains(&d) && h >= 4;
    let reason = format!("d = {d}, h = {h}; needs 1 <= d <= 3 and h >= 4");
    b.push("small_d", Target::PerCoreHalf, small_d, reason.clone(), per_core);
    b.push("small_d_normalized", Target::Normalized, small_d, reason, || df * half_log_2_over_pi_e);

    let log_ok = log_condition_holds(h, d);
    let reason = format!(
        "h = {h} (needs >= 656), 16 d^3 = {} vs h / ln h = {:.3}",
        16 * d.pow(3),
        h as f64 / (h as f64).ln()
    );
    b.push("log_condition", Target::PerCoreFull, log_ok, reason.clone(), || {
        df / 2.0 * (2.0 / PI).ln() - 2.31 * df * eps
    });
    b.push("log_condition_normalized", Target::Normalized, log_ok, reason, || {
        df * half_log_2_over_pi_e - 2.38 * df * eps
    });

    let cubic = d >= 1 && del <= 1.0;
    let reason = format!("d = {d}, delta = 6 d^3 / h = {del:.6}; needs d >= 1 and delta <= 1");
    b.push("cubic_condition", Target::PerCoreFull, cubic, reason.clone(), || {
        df * 0.594f64.ln() + (1.0 - 0.93 * del).ln()
    });
    b.push("cubic_condition_normalized", Target::Normalized, cubic, reason, || {
        df * 0.352f64.ln() + (1.0 - 0.93 * del).ln()
    });

    b.push("uniform", Target::Normalized, true, "always".into(), || 0.07f64.ln() + df * 0.352f64.ln());

    Ok(BoundReport { context, entries: b.entries, conjectured_floor: CONJECTURED_FLOOR })
}
