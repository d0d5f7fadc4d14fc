//! Paley constructions from the quadratic character of `GF(p)`.

use super::{Base, Kind, QuasiOrthogonal, Recipe};
use crate::error::{Error, Result};
use crate::primes::{is_prime, quadratic_character};

fn require_prime(p: u64, residue: u64) -> Result<()> {
    if !is_prime(p) || p % 4 != residue {
        return Err(Error::Precondition(format!("{p} is not a prime congruent to {residue} mod 4")));
    }
    Ok(())
}

/// `chi(j - i)` on the `p x p` core, indices already shifted past the border.
fn core_entry(chi: &[i8], p: u64, i: usize, j: usize) -> i8 {
    chi[((j as u64 + p - i as u64) % p) as usize]
}

/// Normalized Paley type I Hadamard matrix of order `p + 1`, `p ≡ 3 (mod 4)`.
pub fn paley_one(p: u64) -> Result<QuasiOrthogonal> {
    require_prime(p, 3)?;
    let chi = quadratic_character(p);
    // I + S with S = [[0, e^T], [-e, Q]], then rows 1.. negated so the first
    // row and column are all +1.
    let q = QuasiOrthogonal::from_fn(Kind::Hadamard, p as usize + 1, |i, j| {
        let raw = if i == j || i == 0 {
            1
        } else if j == 0 {
            -1
        } else {
            core_entry(&chi, p, i - 1, j - 1)
        };
        if i == 0 {
            raw
        } else {
            -raw
        }
    })?;
    Ok(q.with_recipe(Recipe::base(Base::PaleyOne(p))))
}

/// Symmetric conference matrix of order `p + 1`, `p ≡ 1 (mod 4)`.
pub fn paley_conference(p: u64) -> Result<QuasiOrthogonal> {
    require_prime(p, 1)?;
    let chi = quadratic_character(p);
    let q = QuasiOrthogonal::from_fn(Kind::Conference, p as usize + 1, |i, j| {
        if i == j {
            0
        } else if i == 0 || j == 0 {
            1
        } else {
            core_entry(&chi, p, i - 1, j - 1)
        }
    })?;
    Ok(q.with_recipe(Recipe::base(Base::Conference(p))))
}

/// Paley type II Hadamard matrix of order `2(p + 1)`, `p ≡ 1 (mod 4)`.
pub fn paley_two(p: u64) -> Result<QuasiOrthogonal> {
    require_prime(p, 1)?;
    let chi = quadratic_character(p);
    const ZERO_BLOCK: [[i8; 2]; 2] = [[1, -1], [-1, -1]];
    const SIGN_BLOCK: [[i8; 2]; 2] = [[1, 1], [1, -1]];
    let conf = |a: usize, b: usize| -> i8 {
        if a == 0 || b == 0 {
            1
        } else {
            core_entry(&chi, p, a - 1, b - 1)
        }
    };
    let q = QuasiOrthogonal::from_fn(Kind::Hadamard, 2 * (p as usize + 1), |i, j| {
        let (a, b) = (i / 2, j / 2);
        if a == b {
            ZERO_BLOCK[i % 2][j % 2]
        } else {
            conf(a, b) * SIGN_BLOCK[i % 2][j % 2]
        }
    })?;
    Ok(q.with_recipe(Recipe::base(Base::PaleyTwo(p))))
}
