//! Queries over an [`OrderSet`]: gaps, nearest orders and the region where
//! `6 d^3 > h`.

use serde::Serialize;

use super::OrderSet;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub x: u64,
    /// Largest `n_{i+1} - n_i` over consecutive members with `n_i <= x`.
    pub gamma: u64,
    /// First consecutive pair attaining `gamma`.
    pub witness_pair: Option<(u64, u64)>,
    /// Every consecutive pair attaining `gamma`.
    pub witnesses: Vec<(u64, u64)>,
}

/// `n = h + d` with `h` the largest member `<= n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Resolution {
    pub n: u64,
    pub h: u64,
    pub d: u64,
}

/// Maximal gap between consecutive members, the lower one `<= x`.
pub fn gap_function(x: u64, set: &OrderSet) -> Result<GapReport> {
    let last = set.predecessor(x);
    if let Some(h) = last {
        if set.successor(h).is_none() {
            return Err(Error::InsufficientHeadroom {
                limit: set.limit(),
                reason: format!("successor of {h} lies beyond the sieve limit"),
            });
        }
    }
    let mut report = GapReport { x, gamma: 0, witness_pair: None, witnesses: Vec::new() };
    let Some(last) = last else { return Ok(report) };
    let mut prev: Option<u64> = None;
    for h in set.members() {
        if let Some(p) = prev {
            let gap = h - p;
            if gap > report.gamma {
                report.gamma = gap;
                report.witnesses.clear();
            }
            if gap == report.gamma {
                report.witnesses.push((p, h));
            }
        }
        if h > last {
            break;
        }
        prev = Some(h);
    }
    report.witness_pair = report.witnesses.first().copied();
    Ok(report)
}

pub fn resolve(n: u64, set: &OrderSet) -> Result<Resolution> {
    if n > set.limit() {
        return Err(Error::InsufficientHeadroom {
            limit: set.limit(),
            reason: format!("cannot resolve {n}"),
        });
    }
    let h = set.predecessor(n).ok_or(Error::BelowSmallestOrder(n))?;
    Ok(Resolution { n, h, d: n - h })
}

fn violates(h: u64, d: u64) -> bool {
    6 * (d as u128).pow(3) > h as u128
}

/// Every `n <= limit` whose resolution `(h, d)` has `6 d^3 > h`, increasing.
pub fn hadregion_violations(set: &OrderSet, limit: u64) -> Result<Vec<u64>> {
    if limit > set.limit() {
        return Err(Error::InsufficientHeadroom { limit: set.limit(), reason: format!("scan to {limit}") });
    }
    let mut out = Vec::new();
    let members: Vec<u64> = set.members().take_while(|&h| h <= limit).collect();
    for (i, &h) in members.iter().enumerate() {
        let end = members.get(i + 1).copied().unwrap_or(limit + 1);
        out.extend((h + 1..end).filter(|&n| violates(h, n - h)));
    }
    Ok(out)
}

/// Smallest `n0` such that no `n` in `[n0, limit]` violates `6 d^3 <= h`.
pub fn hadregion_threshold(set: &OrderSet, limit: u64) -> Result<u64> {
    Ok(hadregion_violations(set, limit)?.last().map_or(1, |&n| n + 1))
}

/// Exponent of the gap function implied by `gamma(n) = O(n^alpha)` on a
/// sequence of orders with gaps `O(h^alpha)` relative to the lower end.
pub fn gap_exponent(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Precondition(format!("gap exponent needs alpha > 0, got {alpha}")));
    }
    Ok(alpha / (1.0 + alpha))
}

/// Consecutive members `(h, h')` whose interior contains orders needing a
/// bordering search: `n = h + d` with `4 <= d <= h' - h - 2` and `6 d^3 > h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionRow {
    pub h: u64,
    pub h_next: u64,
    pub d_min: u64,
    pub d_max: u64,
}

/// Rows for all `n` with `lo <= n < hi`.
pub fn derive_exception_table(set: &OrderSet, lo: u64, hi: u64) -> Result<Vec<ExceptionRow>> {
    if hi > set.limit() {
        return Err(Error::InsufficientHeadroom { limit: set.limit(), reason: format!("table to {hi}") });
    }
    let members: Vec<u64> = set.members().take_while(|&h| h <= hi).collect();
    let mut rows = Vec::new();
    for pair in members.windows(2) {
        let (h, next) = (pair[0], pair[1]);
        let ds: Vec<u64> = (4..(next - h).saturating_sub(1))
            .filter(|&d| violates(h, d) && h + d >= lo && h + d < hi)
            .collect();
        if let (Some(&d_min), Some(&d_max)) = (ds.first(), ds.last()) {
            rows.push(ExceptionRow { h, h_next: next, d_min, d_max });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::super::{build_order_set, Rule, RuleSet};
    use super::*;

    fn small() -> OrderSet {
        build_order_set(64, RuleSet::all()).unwrap()
    }

    #[test]
    fn gap_examples() {
        let set = small();
        let r = gap_function(4, &set).unwrap();
        assert_eq!((r.gamma, r.witness_pair), (4, Some((4, 8))));
        let r = gap_function(3, &set).unwrap();
        assert_eq!((r.gamma, r.witness_pair), (2, Some((2, 4))));
        assert!(matches!(gap_function(64, &set), Err(Error::InsufficientHeadroom { .. })));
    }

    #[test]
    fn resolve_examples() {
        let set = build_order_set(6000, RuleSet::all()).unwrap();
        assert_eq!(resolve(672, &set).unwrap(), Resolution { n: 672, h: 672, d: 0 });
        assert_eq!(resolve(669, &set).unwrap(), Resolution { n: 669, h: 664, d: 5 });
        assert_eq!(resolve(5758, &set).unwrap(), Resolution { n: 5758, h: 5744, d: 14 });
        assert!(matches!(resolve(6001, &set), Err(Error::InsufficientHeadroom { .. })));
        assert!(matches!(resolve(0, &set), Err(Error::BelowSmallestOrder(0))));
    }

    #[test]
    fn violations_below_one_hundred() {
        // Independent scan: predecessor found by walking down over multiples
        // of 4 (all present below 100) and the flags for 1, 2.
        let set = build_order_set(100, RuleSet::all()).unwrap();
        let expect: Vec<u64> = (1..=100u64)
            .filter(|&n| {
                let h = if n >= 4 { n - n % 4 } else { n.min(2) };
                6 * (n - h).pow(3) > h
            })
            .collect();
        assert_eq!(hadregion_violations(&set, 100).unwrap(), expect);
        assert_eq!(&expect[..6], &[3, 5, 6, 7, 10, 11]);
        assert_eq!(hadregion_threshold(&set, 100).unwrap(), expect.last().unwrap() + 1);
    }

    #[test]
    fn exponents() {
        assert!((gap_exponent(0.2).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!((gap_exponent(2.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((gap_exponent(0.375).unwrap() - 3.0 / 11.0).abs() < 1e-15);
        assert!(gap_exponent(0.0).is_err());
        assert!(gap_exponent(-1.0).is_err());
        assert!(gap_exponent(f64::NAN).is_err());
    }

    #[test]
    fn single_rule_sets_are_subsets_of_the_full_set() {
        let full = build_order_set(3000, RuleSet::all()).unwrap();
        for rule in Rule::ALL {
            let one = build_order_set(3000, RuleSet::of(&[rule])).unwrap();
            assert!(one.members().all(|h| full.contains(h)), "{rule:?}");
        }
    }
}
