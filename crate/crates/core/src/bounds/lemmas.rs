//! Numerical checkers for the inequalities behind the bounds. Each checker
//! reports [`Check::Skip`] when its hypotheses do not hold, so a vacuous
//! instance is never counted as a pass.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{central_binomial_ratio, epsilon, g_of_h, g_of_h_f64, log_condition_holds, C};
use crate::bits::PackedSigns;
use crate::border::{exhaustive_borders, row_products, GreedyOrder, Objective};
use crate::construct::{paley_one, Kind, QuasiOrthogonal, Recipe};
use crate::det::det_lu;
use crate::error::{Error, Result};
use crate::matrix::{Matrix, SignMatrix};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Pass,
    Fail,
    Skip,
}

impl Check {
    fn from_bool(ok: bool) -> Check {
        if ok {
            Check::Pass
        } else {
            Check::Fail
        }
    }
}

fn rel_tol<F: Real>() -> F {
    F::lit(1e-12).max(F::lit(64.0) * F::epsilon())
}

/// Which determinant lower bound to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PertVariant {
    /// `A = I - E`, `|e_ij| <= eps`, `d eps <= 1`: `det A >= 1 - d eps`.
    Full,
    /// As `Full` with `e_ii = 0` and `(d-1) eps <= 1`:
    /// `det A >= (1 - (d-1) eps)(1 + eps)^{d-1}`.
    ZeroDiagonal,
    /// `|a_ij| <= eps |a_ii|` for `i != j`:
    /// `|det A| >= prod |a_ii| (1 - (d-1)^2 eps^2)`.
    DiagonallyDominant,
}

/// Test the lower bound of `variant` on the square matrix `a`, allowing a
/// relative slack of `max(1e-12, 64 * machine epsilon)`.
pub fn check_pert_bound<F: Real>(a: &Matrix<F>, eps: F, variant: PertVariant) -> Check {
    pert_check(a, eps, variant, F::zero())
}

fn pert_check<F: Real>(a: &Matrix<F>, eps: F, variant: PertVariant, bound_offset: F) -> Check {
    if !a.is_square() || eps < F::zero() {
        return Check::Skip;
    }
    let d = a.rows();
    let df = F::lit(d as f64);
    let one = F::one();
    let slack = one + rel_tol::<F>();
    let off = |i: usize, j: usize| if i == j { one - *a.get(i, j) } else { -*a.get(i, j) };
    let within = |i: usize, j: usize| off(i, j).abs() <= eps * slack + rel_tol::<F>();
    let all = |f: &dyn Fn(usize, usize) -> bool| (0..d).all(|i| (0..d).all(|j| f(i, j)));
    let (bound, scale, signed) = match variant {
        PertVariant::Full => {
            if df * eps > slack || !all(&within) {
                return Check::Skip;
            }
            (one - df * eps, one, true)
        }
        PertVariant::ZeroDiagonal => {
            let dm1 = F::lit(d.saturating_sub(1) as f64);
            if dm1 * eps > slack || !all(&|i, j| within(i, j) && (i != j || off(i, i).is_zero())) {
                return Check::Skip;
            }
            (
                (one - dm1 * eps) * (one + eps).powi(d.saturating_sub(1) as i32),
                (one + eps).powi(d.saturating_sub(1) as i32),
                true,
            )
        }
        PertVariant::DiagonallyDominant => {
            if !all(&|i, j| i == j || a.get(i, j).abs() <= eps * slack * a.get(i, i).abs()) {
                return Check::Skip;
            }
            let dm1 = F::lit(d.saturating_sub(1) as f64);
            let prod = (0..d).fold(one, |p, i| p * a.get(i, i).abs());
            (prod * (one - dm1 * dm1 * eps * eps), prod, false)
        }
    };
    let Ok(det) = det_lu(a) else { return Check::Skip };
    let det = if signed { det } else { det.abs() };
    let tol = rel_tol::<F>() * scale.max(one);
    Check::from_bool(det >= bound + bound_offset - tol)
}

/// `Pr(X >= lambda) >= (mu - lambda) / (1 - lambda)` for `X` in `[0, 1]`,
/// given as `(value, weight)` outcomes.
pub fn check_es152(outcomes: &[(f64, u64)], lambda: f64) -> Check {
    let total: u64 = outcomes.iter().map(|o| o.1).sum();
    if total == 0 || outcomes.iter().any(|&(v, _)| !(0.0..=1.0).contains(&v)) {
        return Check::Skip;
    }
    let mu = outcomes.iter().map(|&(v, w)| v * w as f64).sum::<f64>() / total as f64;
    if !(lambda < mu) {
        return Check::Skip;
    }
    let tail = outcomes.iter().filter(|o| o.0 >= lambda).map(|o| o.1).sum::<u64>() as f64 / total as f64;
    Check::from_bool(tail >= (mu - lambda) / (1.0 - lambda) - rel_tol::<f64>())
}

/// `2 exp(-2 t^2 / sum (b_i - a_i)^2)`.
pub fn hoeffding_bound(t: f64, ranges: &[(f64, f64)]) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Precondition(format!("Hoeffding bound needs t > 0, got {t}")));
    }
    if ranges.is_empty() || ranges.iter().any(|&(a, b)| !(a <= b)) {
        return Err(Error::Precondition("Hoeffding bound needs nonempty ranges with a <= b".into()));
    }
    let s: f64 = ranges.iter().map(|&(a, b)| (b - a).powi(2)).sum();
    Ok(if s == 0.0 { 0.0 } else { 2.0 * (-2.0 * t * t / s).exp() })
}

fn alpha_ok(n: u64, alpha: f64) -> bool {
    alpha != 0.0 && alpha.abs() < n as f64
}

/// `h^h / n^n > (1 / (n e))^alpha` with `h = n - alpha`.
pub fn check_ineq1(n: u64, alpha: f64) -> Check {
    if !alpha_ok(n, alpha) {
        return Check::Skip;
    }
    // ln(lhs / rhs) = n ((1 - x) ln(1 - x) + x), x = alpha / n
    let x = alpha / n as f64;
    Check::from_bool(n as f64 * ((1.0 - x) * (-x).ln_1p() + x) > 0.0)
}

/// `(h / n)^n > exp(-alpha - alpha^2 / h)` with `h = n - alpha`.
pub fn check_uncond2(n: u64, alpha: f64) -> Check {
    if !alpha_ok(n, alpha) {
        return Check::Skip;
    }
    let nf = n as f64;
    let h = nf - alpha;
    Check::from_bool(nf * (-alpha / nf).ln_1p() + alpha + alpha * alpha / h > 0.0)
}

/// `1 + kappa eps >= exp(beta eps)` with `beta = ln(1 + kappa eps0) / eps0`.
pub fn check_exp_ineq(kappa: f64, eps0: f64, eps: f64) -> Check {
    if !(eps0 > 0.0) || !((kappa * eps0).abs() < 1.0) || !(0.0..=eps0).contains(&eps) {
        return Check::Skip;
    }
    let beta = (kappa * eps0).ln_1p() / eps0;
    let lhs = 1.0 + kappa * eps;
    Check::from_bool(lhs >= (beta * eps).exp() * (1.0 - rel_tol::<f64>()))
}

/// Names of the six conditions checked by [`check_assorted`], in order.
pub const ASSORTED_NAMES: [&str; 6] = [
    "d_eps_at_most_half",
    "eps_at_least_8d_over_h",
    "eps_small",
    "tail_vs_power",
    "linear_vs_exp",
    "g_growth",
];

/// The six auxiliary inequalities used under `h >= 656`, `16 d^3 <= h / ln h`.
pub fn check_assorted(h: u64, d: u64) -> [Check; 6] {
    if d == 0 || !log_condition_holds(h, d) || h % 2 == 1 {
        return [Check::Skip; 6];
    }
    let (hf, df) = (h as f64, d as f64);
    let eps = epsilon(h, d);
    let tol = rel_tol::<f64>();
    [
        Check::from_bool(df * eps <= 0.5 + tol),
        Check::from_bool(eps >= 8.0 * df / hf - tol),
        Check::from_bool(eps <= (C - 0.5) / 1.1 + tol),
        Check::from_bool(2.0 * df * df * (-eps * eps * hf / 8.0).exp() <= (2.0 * eps).powf(df) * (1.0 + tol)),
        Check::from_bool(1.0 - 1.1 * eps / C >= (-1.7262 * eps).exp() * (1.0 - tol)),
        Check::from_bool(g_of_h_f64(h) - 1.0 >= (C - eps / 10.0) * hf.sqrt() * (1.0 - tol)),
    ]
}

/// `binom(h, h/2) > 2^h sqrt(2 / (pi h)) (1 - 1/(4h))` for even `h`.
pub fn binomial_bound_holds(h: u64) -> Check {
    if h == 0 || h % 2 == 1 {
        return Check::Skip;
    }
    let hf = h as f64;
    Check::from_bool(central_binomial_ratio(h) > (2.0 / (PI * hf)).sqrt() * (1.0 - 1.0 / (4.0 * hf)))
}

/// `g(h) > c sqrt(h) + 1 - c / (4 sqrt(h))` and `g(h) > c sqrt(h) + 0.9`.
pub fn g_bound_holds(h: u64) -> Check {
    if h < 4 || h % 2 == 1 {
        return Check::Skip;
    }
    let (g, r) = (g_of_h_f64(h), (h as f64).sqrt());
    Check::from_bool(g > C * r + 1.0 - C / (4.0 * r) && g > C * r + 0.9)
}

/// Exact means over every border `B` of width `d` on a Hadamard core, with
/// `F = G / h`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurMoments {
    pub mean_f11: BigRational,
    /// Present for `d >= 2`.
    pub mean_f12_sq: Option<BigRational>,
}

pub fn schur_moments(q: &QuasiOrthogonal, d: usize) -> Result<SchurMoments> {
    if q.kind() != Kind::Hadamard || d == 0 {
        return Err(Error::Precondition("moments need a Hadamard core and d >= 1".into()));
    }
    let all = exhaustive_borders(q, d, GreedyOrder::RowMajor, Objective::AbsDet)?;
    let count = BigInt::from(all.len());
    let h = BigInt::from(q.order());
    let (mut s11, mut s12) = (BigInt::zero(), BigInt::zero());
    for (border, _) in &all {
        s11 += *border.g.get(0, 0);
        if d >= 2 {
            s12 += BigInt::from(*border.g.get(0, 1)).pow(2);
        }
    }
    Ok(SchurMoments {
        mean_f11: BigRational::new(s11, &count * &h),
        mean_f12_sq: (d >= 2).then(|| BigRational::new(s12, &count * &h * &h)),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LemmaTally {
    pub name: String,
    pub pass: u64,
    pub fail: u64,
    pub skip: u64,
}

impl LemmaTally {
    fn new(name: &str) -> Self {
        LemmaTally { name: name.to_string(), ..Default::default() }
    }

    fn add(&mut self, c: Check) {
        match c {
            Check::Pass => self.pass += 1,
            Check::Fail => self.fail += 1,
            Check::Skip => self.skip += 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub seed: u64,
    pub lemmas: Vec<LemmaTally>,
    /// Largest `|det - (1 - d eps)|` over the rank-one tight cases.
    pub tight_gap: f64,
    /// Empirical `Pr(|Y| >= 2)` next to the Hoeffding bound.
    pub hoeffding_empirical: f64,
    pub hoeffding_bound: f64,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.lemmas.iter().all(|t| t.fail == 0)
    }

    pub fn tally(&self, name: &str) -> Option<&LemmaTally> {
        self.lemmas.iter().find(|t| t.name == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Random instances per perturbation variant satisfying the hypotheses;
    /// one in twenty more are drawn outside them.
    pub pert_instances: usize,
    /// Hoeffding Monte Carlo sample count.
    pub hoeffding_samples: usize,
    /// Tighten the rank-one tight cases by `1e-9` so they must fail.
    pub inject_violation: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 0, pert_instances: 100_000, hoeffding_samples: 10_000, inject_violation: false }
    }
}

/// A random instance of `variant`; with `breaking` set it violates the
/// hypotheses and must come back as a skip.
fn random_pert(rng: &mut ChaCha8Rng, variant: PertVariant, breaking: bool) -> (Matrix<f64>, f64) {
    let d = rng.gen_range(1..=6usize);
    let limit = match variant {
        PertVariant::Full => 1.0 / d as f64,
        _ => 1.0 / (d.max(2) - 1) as f64,
    };
    let eps = if breaking { limit * rng.gen_range(1.01..3.0) } else { limit * rng.gen_range(0.0..=1.0) };
    let entry = |rng: &mut ChaCha8Rng, bound: f64| {
        if rng.gen_bool(0.3) {
            if rng.gen() {
                bound
            } else {
                -bound
            }
        } else {
            rng.gen_range(-1.0..=1.0) * bound
        }
    };
    let a = match variant {
        PertVariant::Full => Matrix::from_fn(d, d, |i, j| (i == j) as u8 as f64 - entry(rng, eps)),
        PertVariant::ZeroDiagonal => Matrix::from_fn(d, d, |i, j| if i == j { 1.0 } else { -entry(rng, eps) }),
        PertVariant::DiagonallyDominant => {
            let diag: Vec<f64> = (0..d).map(|_| rng.gen_range(0.1..10.0) * if rng.gen() { 1.0 } else { -1.0 }).collect();
            Matrix::from_fn(d, d, |i, j| {
                if i == j {
                    diag[i]
                } else {
                    entry(rng, eps * diag[i].abs()) * if breaking { 1.5 } else { 1.0 }
                }
            })
        }
    };
    (a, eps)
}

fn es152_outcomes(q: &QuasiOrthogonal) -> Vec<(f64, u64)> {
    let h = q.order();
    let scale = (h as f64).powf(1.5);
    let mut counts = std::collections::BTreeMap::<i64, u64>::new();
    for bits in 0..1u64 << h {
        let b = PackedSigns::from_fn(h, |i| bits >> i & 1 == 1);
        let g11: i64 = (0..h).map(|t| q.col_dot(t, &b).abs()).sum();
        *counts.entry(g11).or_default() += 1;
    }
    counts.into_iter().map(|(g, c)| (g as f64 / scale, c)).collect()
}

/// Run every checker with fixed seeds and tally the outcomes.
pub fn run_lemma_suite(opts: &SuiteOptions) -> Result<LemmaReport> {
    let mut lemmas = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut t = LemmaTally::new("binomial_bound");
    (2..=4000).step_by(2).for_each(|h| t.add(binomial_bound_holds(h)));
    lemmas.push(t);

    let mut t = LemmaTally::new("g_bound");
    (4..=4000).step_by(2).for_each(|h| t.add(g_bound_holds(h)));
    t.add(Check::from_bool(g_of_h(4)? == BigRational::new(5.into(), 2.into())));
    lemmas.push(t);

    for (name, variant) in [
        ("pert_full", PertVariant::Full),
        ("pert_zero_diagonal", PertVariant::ZeroDiagonal),
        ("pert_diagonally_dominant", PertVariant::DiagonallyDominant),
    ] {
        let mut t = LemmaTally::new(name);
        for i in 0..opts.pert_instances + opts.pert_instances / 20 {
            let (a, eps) = random_pert(&mut rng, variant, i >= opts.pert_instances);
            t.add(check_pert_bound(&a, eps, variant));
        }
        lemmas.push(t);
    }

    let mut t = LemmaTally::new("pert_tight");
    let offset = if opts.inject_violation { 1e-9 } else { 0.0 };
    let mut tight_gap = 0.0f64;
    for d in 1..=6usize {
        for k in 1..=20 {
            let eps = k as f64 / (20 * d) as f64;
            let a = Matrix::from_fn(d, d, |i, j| (i == j) as u8 as f64 - eps);
            tight_gap = tight_gap.max((det_lu(&a)? - (1.0 - d as f64 * eps)).abs());
            t.add(pert_check(&a, eps, PertVariant::Full, offset));
            if d >= 2 {
                let eps2 = k as f64 / (20 * (d - 1)) as f64;
                let a2 = Matrix::from_fn(d, d, |i, j| if i == j { 1.0 } else { -eps2 });
                t.add(pert_check(&a2, eps2, PertVariant::ZeroDiagonal, offset));
            }
        }
    }
    for k in 1..=20 {
        let eps = k as f64 / 20.0;
        let a = Matrix::new(2, 2, vec![1.0, eps, eps, 1.0])?;
        t.add(pert_check(&a, eps, PertVariant::DiagonallyDominant, offset));
    }
    t.add(Check::from_bool(tight_gap <= 1e-12));
    lemmas.push(t);

    let mut t = LemmaTally::new("es152");
    t.add(check_es152(&[(0.0, 1), (1.0, 1)], 0.25));
    t.add(check_es152(&[(1.0, 1)], 0.5));
    for p in [3u64, 7, 11] {
        let q = paley_one(p)?;
        let outcomes = es152_outcomes(&q);
        for k in 0..20 {
            t.add(check_es152(&outcomes, k as f64 / 20.0));
        }
    }
    let q16 = paley_one(7)?.sylvester_double()?;
    let outcomes = es152_outcomes(&q16);
    for k in 0..20 {
        t.add(check_es152(&outcomes, k as f64 / 20.0));
    }
    lemmas.push(t);

    let mut t = LemmaTally::new("hoeffding");
    let q = Recipe::plan_hadamard(256, Default::default()).expect("256 is a power of two").build()?;
    let c = SignMatrix::from_fn(1, 256, |_, _| rng.gen());
    let u: Vec<f64> = row_products(&q, &c).row(0).iter().map(|&v| v as f64 / 256.0).collect();
    let ranges: Vec<(f64, f64)> = u.iter().map(|&x| (-x.abs(), x.abs())).collect();
    let bound = hoeffding_bound(2.0, &ranges)?;
    let hits = (0..opts.hoeffding_samples)
        .filter(|_| u.iter().map(|&x| if rng.gen() { x } else { -x }).sum::<f64>().abs() >= 2.0)
        .count();
    let empirical = hits as f64 / opts.hoeffding_samples.max(1) as f64;
    t.add(Check::from_bool(empirical <= bound + 0.02));
    t.add(Check::from_bool((bound - 2.0 * (-2.0f64).exp()).abs() < 1e-9));
    let curve: Vec<f64> = (1..=40).map(|k| hoeffding_bound(k as f64 * 0.25, &ranges).unwrap()).collect();
    t.add(Check::from_bool(curve.windows(2).all(|w| w[1] < w[0]) && curve[39] < 1e-20));
    lemmas.push(t);

    let mut t1 = LemmaTally::new("ineq1");
    let mut t2 = LemmaTally::new("uncond2");
    for n in 1..=200u64 {
        for j in -(4 * n as i64 - 1)..=(4 * n as i64 - 1) {
            let alpha = j as f64 / 4.0;
            t1.add(check_ineq1(n, alpha));
            t2.add(check_uncond2(n, alpha));
        }
    }
    lemmas.push(t1);
    lemmas.push(t2);

    let mut t = LemmaTally::new("exp_ineq");
    for ki in -14..=14 {
        for ei in 1..=10 {
            let (kappa, eps0) = (ki as f64 * 0.25, ei as f64 * 0.05);
            for s in 0..=20 {
                t.add(check_exp_ineq(kappa, eps0, eps0 * s as f64 / 20.0));
            }
        }
    }
    lemmas.push(t);

    let mut t = LemmaTally::new("assorted");
    for h in (656..=10_000).step_by(4) {
        for d in 1.. {
            if !log_condition_holds(h, d) {
                break;
            }
            check_assorted(h, d).into_iter().for_each(|c| t.add(c));
        }
    }
    lemmas.push(t);

    let mut t = LemmaTally::new("schur_moments");
    for p in [3u64, 7] {
        let q = paley_one(p)?;
        let g1 = g_of_h(q.order() as u64)? - BigRational::one();
        let m = schur_moments(&q, 1)?;
        t.add(Check::from_bool(m.mean_f11 == g1));
        let m2 = schur_moments(&q, 2)?;
        t.add(Check::from_bool(m2.mean_f12_sq == Some(BigRational::one()) && m2.mean_f11 == g1));
    }
    lemmas.push(t);

    let mut t = LemmaTally::new("row_norms");
    for p in [3u64, 7, 11] {
        let q = paley_one(p)?;
        let h = q.order() as i64;
        for _ in 0..200 {
            let c = SignMatrix::from_fn(3, q.order(), |_, _| rng.gen());
            let cq = row_products(&q, &c);
            (0..3).for_each(|i| t.add(Check::from_bool(cq.row(i).iter().map(|v| v * v).sum::<i64>() == h * h)));
        }
    }
    lemmas.push(t);

    Ok(LemmaReport { seed: opts.seed, lemmas, tight_gap, hoeffding_empirical: empirical, hoeffding_bound: bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pert_examples() {
        let a = Matrix::from_fn(3, 3, |i, j| (i == j) as u8 as f64 - 0.2);
        assert!((det_lu(&a).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(check_pert_bound(&a, 0.2, PertVariant::Full), Check::Pass);
        assert_eq!(pert_check(&a, 0.2, PertVariant::Full, 1e-9), Check::Fail);
        assert_eq!(check_pert_bound(&a, 0.1, PertVariant::Full), Check::Skip);
        assert_eq!(check_pert_bound(&a, 0.4, PertVariant::Full), Check::Skip);
        let eps: f64 = 0.3;
        let b = Matrix::new(2, 2, vec![1.0, eps, eps, 1.0]).unwrap();
        assert!((det_lu(&b).unwrap() - (1.0 - eps * eps)).abs() < 1e-15);
        assert_eq!(check_pert_bound(&b, eps, PertVariant::DiagonallyDominant), Check::Pass);
        assert_eq!(check_pert_bound(&b, 0.2, PertVariant::DiagonallyDominant), Check::Skip);
        let a32 = Matrix::from_fn(3, 3, |i, j| (i == j) as u8 as f32 - 0.2);
        assert_eq!(check_pert_bound(&a32, 0.2f32, PertVariant::Full), Check::Pass);
    }

    #[test]
    fn es152_examples() {
        assert_eq!(check_es152(&[(0.0, 1), (1.0, 1)], 0.25), Check::Pass);
        assert_eq!(check_es152(&[(1.0, 1)], 0.99), Check::Pass);
        assert_eq!(check_es152(&[(0.0, 1), (1.0, 1)], 0.5), Check::Skip);
        assert_eq!(check_es152(&[(1.5, 1)], 0.1), Check::Skip);
        let out = es152_outcomes(&paley_one(3).unwrap());
        assert_eq!(out.iter().map(|o| o.1).sum::<u64>(), 16);
        assert_eq!(check_es152(&out, 0.5), Check::Pass);
    }

    #[test]
    fn hoeffding_examples() {
        let unit = vec![(-0.5, 0.5); 4];
        assert!((hoeffding_bound(2.0, &unit).unwrap() - 0.27067).abs() < 1e-5);
        assert!(hoeffding_bound(0.0, &unit).is_err());
        assert!(hoeffding_bound(1.0, &[]).is_err());
    }

    #[test]
    fn scalar_examples() {
        assert!(4f64.powi(4) / 5f64.powi(5) > 1.0 / (5.0 * std::f64::consts::E));
        assert_eq!(check_ineq1(5, 1.0), Check::Pass);
        assert_eq!(check_ineq1(5, 0.0), Check::Skip);
        assert_eq!(check_ineq1(5, 5.0), Check::Skip);
        assert!((16.0f64 / 18.0).powi(18) > (-2.25f64).exp());
        assert_eq!(check_uncond2(18, 2.0), Check::Pass);
        assert_eq!(check_exp_ineq(-1.1 / C, 0.2704, 0.1), Check::Pass);
        assert_eq!(check_exp_ineq(5.0, 0.5, 0.1), Check::Skip);
        assert!(((C - 0.5) / 1.1 - 0.2708).abs() < 1e-3);
        assert!(((2.0 * 656f64.ln() / 656.0).cbrt() - 0.2704).abs() < 1e-4);
        assert_eq!(check_assorted(656, 1), [Check::Pass; 6]);
        assert_eq!(check_assorted(656, 2), [Check::Skip; 6]);
    }

    #[test]
    fn moments_at_order_four() {
        let q = paley_one(3).unwrap();
        let m = schur_moments(&q, 2).unwrap();
        assert_eq!(m.mean_f11, BigRational::new(3.into(), 2.into()));
        assert_eq!(m.mean_f12_sq, Some(BigRational::one()));
    }

    #[test]
    fn small_suite_passes_and_injection_fails() {
        let opts = SuiteOptions { pert_instances: 2000, hoeffding_samples: 2000, ..Default::default() };
        let r = run_lemma_suite(&opts).unwrap();
        assert!(r.passed(), "{r:?}");
        for t in &r.lemmas {
            assert!(t.pass > 0, "{}", t.name);
        }
        assert!(r.tally("pert_full").unwrap().skip > 0);
        let bad = run_lemma_suite(&SuiteOptions { inject_violation: true, ..opts }).unwrap();
        assert!(!bad.passed());
        assert!(bad.tally("pert_tight").unwrap().fail > 0);
    }
}
