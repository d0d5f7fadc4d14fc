//! Textual recipes for building matrices, and the planner that picks one.
//!
//! Grammar: `base(;step)*` with bases `unit`, `paley1(p)`, `paley2(p)`,
//! `conference(p)` and steps `double` and `kron(<recipe>)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{paley_conference, paley_one, paley_two, Kind, QuasiOrthogonal};
use crate::error::{Error, Result};
use crate::primes::is_prime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    Unit,
    PaleyOne(u64),
    PaleyTwo(u64),
    Conference(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Double,
    Kron(Box<Recipe>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Recipe {
    pub base: Base,
    pub steps: Vec<Step>,
}

/// Which construction families the planner may use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Method {
    #[default]
    Auto,
    PaleyOne,
    PaleyTwo,
    Conference,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::PaleyOne => "paley1",
            Method::PaleyTwo => "paley2",
            Method::Conference => "conference",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "paley1" => Ok(Method::PaleyOne),
            "paley2" => Ok(Method::PaleyTwo),
            "conference" => Ok(Method::Conference),
            _ => Err(Error::Precondition(format!("unknown method {s:?}"))),
        }
    }
}

impl Recipe {
    pub fn base(base: Base) -> Self {
        Recipe { base, steps: Vec::new() }
    }

    pub fn then_double(mut self, times: u32) -> Self {
        self.steps.extend((0..times).map(|_| Step::Double));
        self
    }

    pub fn kind(&self) -> Kind {
        match self.base {
            Base::Conference(_) => Kind::Conference,
            _ => Kind::Hadamard,
        }
    }

    /// Order of the matrix the recipe builds.
    pub fn order(&self) -> u64 {
        let base = match self.base {
            Base::Unit => 1,
            Base::PaleyOne(p) | Base::Conference(p) => p + 1,
            Base::PaleyTwo(p) => 2 * (p + 1),
        };
        self.steps.iter().fold(base, |acc, s| match s {
            Step::Double => acc * 2,
            Step::Kron(r) => acc * r.order(),
        })
    }

    pub fn build(&self) -> Result<QuasiOrthogonal> {
        let mut q = match self.base {
            Base::Unit => QuasiOrthogonal::unit().with_recipe(Recipe::base(Base::Unit)),
            Base::PaleyOne(p) => paley_one(p)?,
            Base::PaleyTwo(p) => paley_two(p)?,
            Base::Conference(p) => paley_conference(p)?,
        };
        for step in &self.steps {
            q = match step {
                Step::Double => q.sylvester_double()?,
                Step::Kron(r) => q.kronecker(&r.build()?)?,
            };
        }
        Ok(q)
    }

    /// Plan a Hadamard matrix of the given order: an optional Paley base
    /// followed by Sylvester doublings.
    pub fn plan_hadamard(order: u64, method: Method) -> Option<Recipe> {
        if order == 0 {
            return None;
        }
        let mut j = 0u32;
        loop {
            let r = order >> j;
            let try_one = matches!(method, Method::Auto | Method::PaleyOne);
            let try_two = matches!(method, Method::Auto | Method::PaleyTwo);
            if try_one && r >= 4 && is_prime(r - 1) && (r - 1) % 4 == 3 {
                return Some(Recipe::base(Base::PaleyOne(r - 1)).then_double(j));
            }
            if try_two && r % 2 == 0 && r >= 4 {
                let p = r / 2 - 1;
                if is_prime(p) && p % 4 == 1 {
                    return Some(Recipe::base(Base::PaleyTwo(p)).then_double(j));
                }
            }
            if method == Method::Auto && r == 1 {
                return Some(Recipe::base(Base::Unit).then_double(j));
            }
            if r % 2 != 0 {
                return None;
            }
            j += 1;
        }
    }

    /// Plan a matrix for a bordering problem of order `n`: a Hadamard matrix
    /// of exactly `order`, or for [`Method::Conference`] the largest Paley
    /// conference matrix of order at most `order`.
    pub fn plan(order: u64, method: Method) -> Option<Recipe> {
        match method {
            Method::Conference => largest_conference_at_most(order),
            m => Self::plan_hadamard(order, m),
        }
    }
}

/// Largest `conference(p)` with `p ≡ 1 (mod 4)` prime and `p + 1 <= n`.
pub fn largest_conference_at_most(n: u64) -> Option<Recipe> {
    (5..n).rev().find(|&p| p % 4 == 1 && is_prime(p)).map(|p| Recipe::base(Base::Conference(p)))
}

/// Order closest to `order` for which the planner can produce a Hadamard
/// recipe; ties go to the smaller order.
pub fn nearest_hadamard_order(order: u64, method: Method) -> Option<u64> {
    for delta in 0..=order.max(64) {
        if let Some(lo) = order.checked_sub(delta) {
            if lo > 0 && Recipe::plan_hadamard(lo, method).is_some() {
                return Some(lo);
            }
        }
        if Recipe::plan_hadamard(order + delta, method).is_some() {
            return Some(order + delta);
        }
    }
    None
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base {
            Base::Unit => write!(f, "unit")?,
            Base::PaleyOne(p) => write!(f, "paley1({p})")?,
            Base::PaleyTwo(p) => write!(f, "paley2({p})")?,
            Base::Conference(p) => write!(f, "conference({p})")?,
        }
        for step in &self.steps {
            match step {
                Step::Double => write!(f, ";double")?,
                Step::Kron(r) => write!(f, ";kron({r})")?,
            }
        }
        Ok(())
    }
}

fn split_top_level(s: &str) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            ';' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return None;
    }
    parts.push(&s[start..]);
    Some(parts)
}

fn call<'a>(token: &'a str, name: &str) -> Option<&'a str> {
    token.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')
}

impl FromStr for Recipe {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let fail = |reason: &str| Error::RecipeParse { input: input.to_string(), reason: reason.to_string() };
        let parts = split_top_level(input.trim()).ok_or_else(|| fail("unbalanced parentheses"))?;
        let prime = |arg: &str| arg.trim().parse::<u64>().map_err(|_| fail("expected an integer argument"));
        let head = parts[0].trim();
        let base = if head == "unit" {
            Base::Unit
        } else if let Some(arg) = call(head, "paley1") {
            Base::PaleyOne(prime(arg)?)
        } else if let Some(arg) = call(head, "paley2") {
            Base::PaleyTwo(prime(arg)?)
        } else if let Some(arg) = call(head, "conference") {
            Base::Conference(prime(arg)?)
        } else {
            return Err(fail("unknown base"));
        };
        let mut steps = Vec::new();
        for part in &parts[1..] {
            let part = part.trim();
            if part == "double" {
                steps.push(Step::Double);
            } else if let Some(inner) = call(part, "kron") {
                steps.push(Step::Kron(Box::new(inner.parse()?)));
            } else {
                return Err(fail("unknown step"));
            }
        }
        if matches!(base, Base::Conference(_)) && !steps.is_empty() {
            return Err(fail("conference matrices take no steps"));
        }
        Ok(Recipe { base, steps })
    }
}

impl Serialize for Recipe {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Recipe {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planner_picks_expected_bases() {
        assert_eq!(Recipe::plan_hadamard(664, Method::Auto).unwrap().to_string(), "paley1(331);double");
        assert_eq!(Recipe::plan_hadamard(2868, Method::Auto).unwrap().to_string(), "paley2(1433)");
        assert_eq!(Recipe::plan_hadamard(1, Method::Auto).unwrap().to_string(), "unit");
        assert_eq!(Recipe::plan_hadamard(2, Method::Auto).unwrap().to_string(), "unit;double");
        assert_eq!(Recipe::plan_hadamard(4, Method::Auto).unwrap().to_string(), "paley1(3)");
        assert_eq!(Recipe::plan_hadamard(64, Method::Auto).unwrap().order(), 64);
        assert_eq!(Recipe::plan_hadamard(12, Method::PaleyTwo).unwrap().to_string(), "paley2(5)");
        assert!(Recipe::plan_hadamard(668, Method::Auto).is_none());
        assert!(Recipe::plan_hadamard(6, Method::Auto).is_none());
        assert_eq!(Recipe::plan(717, Method::Conference).unwrap().to_string(), "conference(709)");
        assert_eq!(Recipe::plan(5758, Method::Conference).unwrap().to_string(), "conference(5749)");
    }

    #[test]
    fn planned_orders_match() {
        for order in (4..=512).step_by(4) {
            if let Some(r) = Recipe::plan_hadamard(order, Method::Auto) {
                assert_eq!(r.order(), order);
            }
        }
    }

    #[test]
    fn nearest_order() {
        assert_eq!(nearest_hadamard_order(664, Method::Auto), Some(664));
        let near = nearest_hadamard_order(668, Method::Auto).unwrap();
        assert!(near == 664 || near == 672);
        assert!(Recipe::plan_hadamard(near, Method::Auto).is_some());
    }

    #[test]
    fn text_roundtrip() {
        for s in [
            "unit",
            "paley1(3);double;double",
            "paley2(5);kron(paley1(7);double)",
            "conference(709)",
            "unit;kron(unit;double);kron(paley1(3))",
        ] {
            let r: Recipe = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        let r: Recipe = "paley2(5);kron(paley1(7);double)".parse().unwrap();
        assert_eq!(r.order(), 12 * 16);
        let q = r.build().unwrap();
        assert_eq!(q.order(), 192);
        assert!(q.validate());
        assert_eq!(q.recipe().unwrap(), &r);
    }

    #[test]
    fn malformed_recipes() {
        for s in ["", "paley1(3", "paley1(x)", "hadamard(4)", "unit;triple", "conference(5);double", "unit)("] {
            assert!(matches!(s.parse::<Recipe>(), Err(Error::RecipeParse { .. })), "{s}");
        }
        assert!(matches!("paley1(5)".parse::<Recipe>().unwrap().build(), Err(Error::Precondition(_))));
    }
}
