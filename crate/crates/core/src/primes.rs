//! Prime and prime-power tables.

/// Trial-division primality for the moderate values used by recipes.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut f = 5u64;
    while f.saturating_mul(f) <= n {
        if n % f == 0 || n % (f + 2) == 0 {
            return false;
        }
        f += 6;
    }
    true
}

/// All primes `<= limit`, by a segmented sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    let small = simple_sieve(root);
    let mut out = Vec::new();
    const SEGMENT: u64 = 1 << 18;
    let mut seg = vec![true; SEGMENT as usize];
    let mut lo = 0u64;
    while lo <= limit {
        let hi = (lo + SEGMENT - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        seg[..len].fill(true);
        for &p in &small {
            if p * p > hi {
                break;
            }
            let mut start = (lo.div_ceil(p) * p).max(p * p);
            while start <= hi {
                seg[(start - lo) as usize] = false;
                start += p;
            }
        }
        for (i, &is_p) in seg[..len].iter().enumerate() {
            let v = lo + i as u64;
            if is_p && v >= 2 {
                out.push(v);
            }
        }
        lo = hi + 1;
    }
    out
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Membership table for prime powers `p^k` (`k >= 1`) up to a limit.
#[derive(Clone, Debug)]
pub struct PrimePowers {
    limit: u64,
    bits: Vec<u64>,
    primes: Vec<u64>,
}

impl PrimePowers {
    pub fn new(limit: u64) -> Self {
        let primes = primes_up_to(limit);
        let mut bits = vec![0u64; (limit as usize >> 6) + 1];
        for &p in &primes {
            let mut q = p;
            loop {
                bits[(q >> 6) as usize] |= 1 << (q & 63);
                match q.checked_mul(p) {
                    Some(next) if next <= limit => q = next,
                    _ => break,
                }
            }
        }
        PrimePowers { limit, bits, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn contains(&self, q: u64) -> bool {
        q <= self.limit && self.bits[(q >> 6) as usize] >> (q & 63) & 1 == 1
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Prime powers in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (2..=self.limit).filter(move |&q| self.contains(q))
    }
}

/// Quadratic character modulo an odd prime `p`: `chi[x]` for `0 <= x < p`.
pub fn quadratic_character(p: u64) -> Vec<i8> {
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    for x in 1..p {
        chi[(x * x % p) as usize] = 1;
    }
    chi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segmented_sieve_matches_trial_division() {
        let ps = primes_up_to(600_000);
        let brute: Vec<u64> = (0..=600_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, brute);
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(2), vec![2]);
    }

    #[test]
    fn prime_powers() {
        let pp = PrimePowers::new(1000);
        for q in [2, 3, 4, 5, 7, 8, 9, 27, 125, 243, 343, 512, 729, 961, 997] {
            assert!(pp.contains(q), "{q}");
        }
        for q in [0, 1, 6, 10, 12, 36, 100, 1000] {
            assert!(!pp.contains(q), "{q}");
        }
        assert!(!pp.contains(1024));
    }

    #[test]
    fn table_one_primes() {
        for p in [331, 709, 443, 499, 563, 619, 1433, 5749, 5023, 23993, 47963, 53731, 60457] {
            assert!(is_prime(p), "{p}");
        }
    }

    #[test]
    fn character_of_small_prime() {
        // squares mod 7: 1, 2, 4
        assert_eq!(quadratic_character(7), vec![0, 1, 1, -1, 1, -1, -1]);
    }
}
