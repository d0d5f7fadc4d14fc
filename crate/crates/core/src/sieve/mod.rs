//! Known-constructible Hadamard orders up to a limit.
//!
//! [`build_order_set`] closes a set of orders under a fixed list of
//! order-arithmetic rules (products, Paley-type families, Williamson and
//! Baumert-Hall tables, ...). The result is a subset of the true set of
//! Hadamard orders: membership is a proof of existence, absence is not a
//! proof of non-existence.

mod cache;
mod gaps;

pub use cache::CACHE_MAGIC;
pub use gaps::{
    derive_exception_table, gap_exponent, gap_function, hadregion_threshold, hadregion_violations,
    resolve, ExceptionRow, GapReport, Resolution,
};

use std::fmt;
use std::str::FromStr;

use crate::construct::{Base, Recipe};
use crate::error::{Error, Result};
use crate::primes::PrimePowers;

/// One order-arithmetic rule. Discriminants are the stable rule ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Rule {
    /// `2^j (p^k + 1)` for `p` prime or `p = 0`, whenever divisible by 4.
    PaleySylvesterTuryn = 1,
    /// `4a, 4b` members imply `8ab`.
    AgaianSarukhanyan = 2,
    /// `4a, 4b, 4c, 4d` members imply `16abcd`.
    CraigenSeberryZhang = 3,
    /// `(q + 1)^2` for twin odd prime powers `q, q + 2`.
    TwinPrime = 4,
    /// `8(x + y)` for complex Golay numbers `x, y`.
    ComplexGolay = 5,
    /// `4q` for a prime power `q` with `q - 1` a member.
    MiyamotoOne = 6,
    /// `8q` for prime powers `q, 2q - 3` with `q ≡ 3 (mod 4)`.
    MiyamotoTwo = 7,
    /// `4(q + 2)` for a prime power `q ≡ 5 (mod 8)` with `(q + 3)/2` a member.
    YamadaKiyasu = 8,
    /// Every multiple of 4 up to 2056 outside a short list of open cases.
    SmallOrders = 9,
    /// `4bw` for a Williamson order `w` and a Baumert-Hall order `b`.
    BaumertHallWilliamson = 10,
    /// As rule 10 with Williamson orders `2q + 3` (`q, 2q + 3` prime powers).
    SeberryYamada = 11,
    /// `2^{6k+5} q` for `k >= 1`, `1 <= q <= 2^{26k+1}`.
    Livinskyi = 12,
}

impl Rule {
    pub const ALL: [Rule; 12] = [
        Rule::PaleySylvesterTuryn,
        Rule::AgaianSarukhanyan,
        Rule::CraigenSeberryZhang,
        Rule::TwinPrime,
        Rule::ComplexGolay,
        Rule::MiyamotoOne,
        Rule::MiyamotoTwo,
        Rule::YamadaKiyasu,
        Rule::SmallOrders,
        Rule::BaumertHallWilliamson,
        Rule::SeberryYamada,
        Rule::Livinskyi,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<Rule> {
        Rule::ALL.get((id as usize).wrapping_sub(1)).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::PaleySylvesterTuryn => "paley-sylvester-turyn",
            Rule::AgaianSarukhanyan => "agaian-sarukhanyan",
            Rule::CraigenSeberryZhang => "craigen-seberry-zhang",
            Rule::TwinPrime => "twin-prime",
            Rule::ComplexGolay => "complex-golay",
            Rule::MiyamotoOne => "miyamoto-1",
            Rule::MiyamotoTwo => "miyamoto-2",
            Rule::YamadaKiyasu => "yamada-kiyasu",
            Rule::SmallOrders => "small-orders",
            Rule::BaumertHallWilliamson => "baumert-hall-williamson",
            Rule::SeberryYamada => "seberry-yamada",
            Rule::Livinskyi => "livinskyi",
        }
    }
}

/// Multiples of 4 up to 2056 whose Hadamard status is open.
pub const SMALL_ORDER_EXCEPTIONS: [u64; 13] =
    [668, 716, 892, 1004, 1132, 1244, 1388, 1436, 1676, 1772, 1916, 1948, 1964];
pub const SMALL_ORDER_LIMIT: u64 = 2056;
/// Williamson orders `1..=64` other than these are known.
pub const WILLIAMSON_GAPS: [u64; 4] = [35, 47, 53, 59];
pub const WILLIAMSON_LIMIT: u64 = 64;
/// Baumert-Hall orders `1..=108` other than these are known, plus all `2^k + 1`.
pub const BAUMERT_HALL_GAPS: [u64; 2] = [97, 103];
pub const BAUMERT_HALL_LIMIT: u64 = 108;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RuleSet(u16);

impl RuleSet {
    pub fn all() -> Self {
        Self::of(&Rule::ALL)
    }

    pub fn empty() -> Self {
        RuleSet(0)
    }

    pub fn of(rules: &[Rule]) -> Self {
        RuleSet(rules.iter().fold(0, |acc, r| acc | 1 << r.id()))
    }

    pub fn with(self, rule: Rule) -> Self {
        RuleSet(self.0 | 1 << rule.id())
    }

    pub fn without(self, rule: Rule) -> Self {
        RuleSet(self.0 & !(1 << rule.id()))
    }

    pub fn contains(self, rule: Rule) -> bool {
        self.0 >> rule.id() & 1 == 1
    }

    pub fn is_superset(self, other: RuleSet) -> bool {
        other.0 & !self.0 == 0
    }

    pub fn rules(self) -> impl Iterator<Item = Rule> {
        Rule::ALL.into_iter().filter(move |r| self.contains(*r))
    }

    pub fn ids(self) -> Vec<u8> {
        self.rules().map(Rule::id).collect()
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        Self::all()
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.rules().map(|r| r.id().to_string()).collect();
        f.write_str(&ids.join(","))
    }
}

impl FromStr for RuleSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "all" || s == "default" {
            return Ok(Self::all());
        }
        let mut set = Self::empty();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let rule = part
                .parse::<u8>()
                .ok()
                .and_then(Rule::from_id)
                .ok_or_else(|| Error::Precondition(format!("unknown rule id {part:?}")))?;
            set = set.with(rule);
        }
        Ok(set)
    }
}

/// Set of orders with a membership bitset: bit `i` stands for order `4i`,
/// with separate flags for orders 1 and 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderSet {
    limit: u64,
    bits: Vec<u64>,
    one: bool,
    two: bool,
    tags: Option<Vec<u8>>,
}

impl OrderSet {
    pub(crate) fn empty(limit: u64, with_tags: bool) -> Self {
        let slots = (limit / 4 + 1) as usize;
        OrderSet {
            limit,
            bits: vec![0; slots.div_ceil(64)],
            one: false,
            two: false,
            tags: with_tags.then(|| vec![0; slots]),
        }
    }

    pub(crate) fn from_raw(limit: u64, bits: Vec<u64>, one: bool, two: bool) -> Self {
        OrderSet { limit, bits, one, two, tags: None }
    }

    pub(crate) fn raw_bits(&self) -> &[u64] {
        &self.bits
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn contains(&self, h: u64) -> bool {
        match h {
            1 => self.one,
            2 => self.two,
            _ if h % 4 != 0 || h > self.limit || h == 0 => false,
            _ => self.has_slot((h / 4) as usize),
        }
    }

    fn has_slot(&self, i: usize) -> bool {
        self.bits[i >> 6] >> (i & 63) & 1 == 1
    }

    /// Adds `h`; returns true if it was new. Orders outside the limit are
    /// ignored.
    fn insert(&mut self, h: u64, rule: Rule) -> bool {
        match h {
            1 => !std::mem::replace(&mut self.one, true),
            2 => !std::mem::replace(&mut self.two, true),
            _ if h == 0 || h % 4 != 0 || h > self.limit => false,
            _ => {
                let i = (h / 4) as usize;
                let was = self.has_slot(i);
                self.bits[i >> 6] |= 1 << (i & 63);
                if !was {
                    if let Some(tags) = &mut self.tags {
                        tags[i] = rule.id();
                    }
                }
                !was
            }
        }
    }

    /// Whether rule provenance was recorded. Sets read from a cache file
    /// carry membership only.
    pub fn has_provenance(&self) -> bool {
        self.tags.is_some()
    }

    /// The rule that first produced `h`, when provenance was recorded.
    pub fn provenance(&self, h: u64) -> Option<Rule> {
        if !self.contains(h) || h < 4 {
            return None;
        }
        self.tags.as_ref().and_then(|t| Rule::from_id(t[(h / 4) as usize]))
    }

    /// Members in increasing order.
    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        let small = [(1u64, self.one), (2, self.two)].into_iter().filter(|p| p.1).map(|p| p.0);
        let big = self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as u64;
                rest &= rest - 1;
                Some(4 * (64 * w as u64 + b))
            })
        });
        small.chain(big.filter(|&h| h > 0))
    }

    pub fn len(&self) -> usize {
        self.one as usize + self.two as usize + self.bits.iter().map(|w| w.count_ones() as usize).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest member `<= n`.
    pub fn predecessor(&self, n: u64) -> Option<u64> {
        let top = n.min(self.limit) / 4;
        if top > 0 {
            let mut w = (top >> 6) as usize;
            let mut word = self.bits[w] & (u64::MAX >> (63 - (top & 63)));
            loop {
                // slot 0 (order 0) is never set
                if word != 0 {
                    return Some(4 * (64 * w as u64 + 63 - word.leading_zeros() as u64));
                }
                if w == 0 {
                    break;
                }
                w -= 1;
                word = self.bits[w];
            }
        }
        if n >= 2 && self.two {
            Some(2)
        } else if n >= 1 && self.one {
            Some(1)
        } else {
            None
        }
    }

    /// Smallest member `> n`, if it lies within the limit.
    pub fn successor(&self, n: u64) -> Option<u64> {
        if n < 1 && self.one {
            return Some(1);
        }
        if n < 2 && self.two {
            return Some(2);
        }
        let start = n / 4 + 1;
        if 4 * start > self.limit {
            return None;
        }
        let mut w = (start >> 6) as usize;
        let mut word = self.bits[w] & (u64::MAX << (start & 63));
        loop {
            if word != 0 {
                return Some(4 * (64 * w as u64 + word.trailing_zeros() as u64));
            }
            w += 1;
            if w >= self.bits.len() {
                return None;
            }
            word = self.bits[w];
        }
    }

    fn quarter_members(&self, max: u64) -> Vec<u64> {
        self.members().filter(|&h| h >= 4 && h / 4 <= max).map(|h| h / 4).collect()
    }
}

/// Close `{1, 2}` under the selected rules up to `limit`.
pub fn build_order_set(limit: u64, rules: RuleSet) -> Result<OrderSet> {
    if limit < 4 {
        return Err(Error::Precondition(format!("sieve limit {limit} is below 4")));
    }
    let mut set = OrderSet::empty(limit, true);
    set.one = true;
    set.two = true;
    let powers = PrimePowers::new(limit);

    for rule in rules.rules() {
        match rule {
            Rule::PaleySylvesterTuryn => paley_sylvester_turyn(&mut set, &powers),
            Rule::TwinPrime => twin_prime(&mut set, &powers),
            Rule::ComplexGolay => complex_golay(&mut set),
            Rule::MiyamotoTwo => miyamoto_two(&mut set, &powers),
            Rule::SmallOrders => small_orders(&mut set),
            Rule::BaumertHallWilliamson => {
                let w: Vec<u64> =
                    (1..=WILLIAMSON_LIMIT).filter(|w| !WILLIAMSON_GAPS.contains(w)).collect();
                baumert_hall_products(&mut set, &w, rule)
            }
            Rule::SeberryYamada => {
                let w: Vec<u64> = (1..=limit / 8)
                    .filter(|&q| powers.contains(q) && powers.contains(2 * q + 3))
                    .map(|q| 2 * q + 3)
                    .collect();
                baumert_hall_products(&mut set, &w, rule)
            }
            Rule::Livinskyi => livinskyi(&mut set),
            _ => {}
        }
    }

    let dependent = [Rule::AgaianSarukhanyan, Rule::CraigenSeberryZhang, Rule::MiyamotoOne, Rule::YamadaKiyasu];
    loop {
        let mut changed = false;
        for rule in dependent.into_iter().filter(|r| rules.contains(*r)) {
            changed |= match rule {
                Rule::AgaianSarukhanyan | Rule::CraigenSeberryZhang => products(&mut set, rule),
                Rule::MiyamotoOne => miyamoto_one(&mut set, &powers),
                _ => yamada_kiyasu(&mut set, &powers),
            };
        }
        if !changed {
            break;
        }
    }
    Ok(set)
}

fn paley_sylvester_turyn(set: &mut OrderSet, powers: &PrimePowers) {
    let limit = set.limit;
    let mut pow2 = 4;
    while pow2 <= limit {
        set.insert(pow2, Rule::PaleySylvesterTuryn);
        pow2 *= 2;
    }
    // k = 0 gives 2^{j+1}, already covered by the powers of two.
    for &p in powers.primes() {
        let mut pk = p;
        while pk < limit {
            let mut h = pk + 1;
            while h <= limit {
                if h % 4 == 0 {
                    set.insert(h, Rule::PaleySylvesterTuryn);
                }
                h *= 2;
            }
            match pk.checked_mul(p) {
                Some(next) => pk = next,
                None => break,
            }
        }
    }
}

fn twin_prime(set: &mut OrderSet, powers: &PrimePowers) {
    let mut q = 3u64;
    while (q + 1) * (q + 1) <= set.limit {
        if powers.contains(q) && powers.contains(q + 2) {
            set.insert((q + 1) * (q + 1), Rule::TwinPrime);
        }
        q += 2;
    }
}

/// Integers `2^{a-1} 6^b 10^c 22^d 26^e <= max`.
pub fn complex_golay_numbers(max: u64) -> Vec<u64> {
    // With the factor 2 pulled out of each even base the value is
    // 2^{a-1+b+c+d+e} 3^b 5^c 11^d 13^e, an integer unless every exponent
    // is zero and a = 0.
    let mut out = Vec::new();
    let mut odd_parts = vec![(1u64, 0u32)];
    for base in [3u64, 5, 11, 13] {
        let mut next = Vec::new();
        for &(v, twos) in &odd_parts {
            let mut x = v;
            let mut t = twos;
            loop {
                next.push((x, t));
                match x.checked_mul(base) {
                    Some(y) if y <= max => {
                        x = y;
                        t += 1;
                    }
                    _ => break,
                }
            }
        }
        odd_parts = next;
    }
    for (odd, twos) in odd_parts {
        let Some(mut v) = odd.checked_shl(twos.saturating_sub(1)) else { continue };
        while v <= max {
            out.push(v);
            v *= 2;
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn complex_golay(set: &mut OrderSet) {
    let max = set.limit / 8;
    let golay = complex_golay_numbers(max);
    let mut sums = vec![false; max as usize + 1];
    for (i, &x) in golay.iter().enumerate() {
        for &y in &golay[i..] {
            if x + y > max {
                break;
            }
            sums[(x + y) as usize] = true;
        }
    }
    for (q, _) in sums.iter().enumerate().filter(|p| *p.1) {
        set.insert(8 * q as u64, Rule::ComplexGolay);
    }
}

fn miyamoto_two(set: &mut OrderSet, powers: &PrimePowers) {
    for q in (3..=set.limit / 8).step_by(4) {
        if powers.contains(q) && powers.contains(2 * q - 3) {
            set.insert(8 * q, Rule::MiyamotoTwo);
        }
    }
}

fn small_orders(set: &mut OrderSet) {
    for h in (4..=SMALL_ORDER_LIMIT.min(set.limit)).step_by(4) {
        if !SMALL_ORDER_EXCEPTIONS.contains(&h) {
            set.insert(h, Rule::SmallOrders);
        }
    }
}

fn baumert_hall_orders(max: u64) -> Vec<u64> {
    let mut b: Vec<u64> =
        (1..=BAUMERT_HALL_LIMIT.min(max)).filter(|b| !BAUMERT_HALL_GAPS.contains(b)).collect();
    let mut p = 1u64;
    while p < max {
        b.push(p + 1);
        p *= 2;
    }
    b.retain(|&x| x <= max);
    b.sort_unstable();
    b.dedup();
    b
}

fn baumert_hall_products(set: &mut OrderSet, williamson: &[u64], rule: Rule) {
    let max = set.limit / 4;
    let bh = baumert_hall_orders(max);
    for &w in williamson {
        for &b in &bh {
            if b * w > max {
                break;
            }
            set.insert(4 * b * w, rule);
        }
    }
}

fn livinskyi(set: &mut OrderSet) {
    let limit = set.limit;
    for k in 1u32.. {
        let Some(base) = 1u64.checked_shl(6 * k + 5).filter(|&b| b <= limit) else { break };
        let qmax = if 26 * k + 1 >= 64 { u64::MAX } else { 1u64 << (26 * k + 1) };
        let mut q = 1u64;
        while q <= qmax && base * q <= limit {
            set.insert(base * q, Rule::Livinskyi);
            q += 1;
        }
    }
}

/// Rules 2 and 3 share the set `P = {ab : 4a, 4b members}`.
fn products(set: &mut OrderSet, rule: Rule) -> bool {
    let limit = set.limit;
    let pmax = limit / 8;
    let a = set.quarter_members(pmax);
    let mut p = vec![false; pmax as usize + 1];
    for (i, &x) in a.iter().enumerate() {
        for &y in &a[i..] {
            if x * y > pmax {
                break;
            }
            p[(x * y) as usize] = true;
        }
    }
    let pairs: Vec<u64> = (1..=pmax).filter(|&x| p[x as usize]).collect();
    let mut changed = false;
    if rule == Rule::AgaianSarukhanyan {
        for &x in &pairs {
            changed |= set.insert(8 * x, rule);
        }
    } else {
        for (i, &x) in pairs.iter().enumerate() {
            for &y in &pairs[i..] {
                if 16 * x * y > limit {
                    break;
                }
                changed |= set.insert(16 * x * y, rule);
            }
        }
    }
    changed
}

fn miyamoto_one(set: &mut OrderSet, powers: &PrimePowers) -> bool {
    let mut changed = false;
    for q in 2..=set.limit / 4 {
        if powers.contains(q) && set.contains(q - 1) {
            changed |= set.insert(4 * q, Rule::MiyamotoOne);
        }
    }
    changed
}

fn yamada_kiyasu(set: &mut OrderSet, powers: &PrimePowers) -> bool {
    let mut changed = false;
    let mut q = 5u64;
    while 4 * (q + 2) <= set.limit {
        if powers.contains(q) && set.contains((q + 3) / 2) {
            changed |= set.insert(4 * (q + 2), Rule::YamadaKiyasu);
        }
        q += 8;
    }
    changed
}

/// The thirteen exceptional intervals with a gap `h' - h >= 8` in which
/// bordering needs an explicit search, with the construction used for it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExceptionalInterval {
    pub h: u64,
    pub h_next: u64,
    pub d_min: u64,
    pub d_max: u64,
    pub prime: u64,
    pub method: crate::construct::Method,
}

impl ExceptionalInterval {
    /// Core matrix named by the row: a Paley matrix for `prime`, doubled up
    /// to order `h` for the Hadamard families.
    pub fn recipe(&self) -> Option<Recipe> {
        use crate::construct::Method;
        let (base, order) = match self.method {
            Method::PaleyOne => (Base::PaleyOne(self.prime), self.prime + 1),
            Method::PaleyTwo => (Base::PaleyTwo(self.prime), 2 * (self.prime + 1)),
            Method::Conference => return Some(Recipe::base(Base::Conference(self.prime))),
            Method::Auto => return Recipe::plan_hadamard(self.h, Method::Auto),
        };
        if self.h % order != 0 || !(self.h / order).is_power_of_two() {
            return None;
        }
        Some(Recipe::base(base).then_double((self.h / order).trailing_zeros()))
    }

    /// Orders `h + d` for the listed `d`.
    pub fn orders(&self) -> impl Iterator<Item = u64> + '_ {
        (self.d_min..=self.d_max).map(|d| self.h + d)
    }
}

pub const EXCEPTIONAL_INTERVALS: [ExceptionalInterval; 13] = {
    use crate::construct::Method::{Conference as C, PaleyOne as P1, PaleyTwo as P2};
    const fn row(h: u64, h_next: u64, d_min: u64, d_max: u64, prime: u64, method: crate::construct::Method) -> ExceptionalInterval {
        ExceptionalInterval { h, h_next, d_min, d_max, prime, method }
    }
    [
        row(664, 672, 5, 6, 331, P1),
        row(712, 720, 5, 6, 709, C),
        row(888, 896, 6, 6, 443, P1),
        row(1000, 1008, 6, 6, 499, P1),
        row(1128, 1136, 6, 6, 563, P1),
        row(1240, 1248, 6, 6, 619, P1),
        row(2868, 2880, 8, 10, 1433, P2),
        row(5744, 5760, 10, 14, 5749, C),
        row(10048, 10064, 12, 14, 5023, P1),
        row(23980, 24000, 16, 18, 23993, C),
        row(47964, 47988, 20, 22, 47963, P1),
        row(53732, 53760, 21, 26, 53731, P1),
        row(60456, 60480, 22, 22, 60457, C),
    ]
};
