//! Sign + natural-log magnitude representation for quantities like
//! `|det| / n^{n/2}` whose numerator and denominator overflow any float.

use std::cmp::Ordering;
use std::ops::{Div, Mul};

use num_bigint::{BigInt, Sign};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogValue<F> {
    sign: i8,
    log_abs: F,
}

impl<F: Real> LogValue<F> {
    pub fn zero() -> Self {
        LogValue { sign: 0, log_abs: F::neg_infinity() }
    }

    pub fn one() -> Self {
        LogValue { sign: 1, log_abs: F::zero() }
    }

    /// Build from a sign in `{-1, 0, 1}` and `ln |x|`.
    pub fn from_parts(sign: i8, log_abs: F) -> Self {
        match sign.signum() {
            0 => Self::zero(),
            s => LogValue { sign: s, log_abs },
        }
    }

    pub fn from_value(x: F) -> Self {
        if x.is_zero() {
            Self::zero()
        } else {
            LogValue { sign: if x > F::zero() { 1 } else { -1 }, log_abs: x.abs().ln() }
        }
    }

    pub fn from_bigint(x: &BigInt) -> Self {
        let sign = match x.sign() {
            Sign::NoSign => return Self::zero(),
            Sign::Minus => -1,
            Sign::Plus => 1,
        };
        LogValue { sign, log_abs: F::lit(ln_abs_bigint(x)) }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn log_abs(&self) -> F {
        self.log_abs
    }

    pub fn abs(&self) -> Self {
        LogValue { sign: self.sign.abs(), log_abs: self.log_abs }
    }

    /// Decimal value; underflows to zero / overflows to infinity outside the
    /// float range.
    pub fn value(&self) -> F {
        match self.sign {
            0 => F::zero(),
            s => F::lit(s as f64) * self.log_abs.exp(),
        }
    }

    pub fn powf(&self, exponent: F) -> Self {
        match self.sign {
            0 => Self::zero(),
            _ => {
                assert!(self.sign > 0, "real power of a negative LogValue");
                LogValue { sign: 1, log_abs: self.log_abs * exponent }
            }
        }
    }
}

/// Divide `|det|` by the Hadamard bound `n^{n/2}`, keeping the sign.
pub fn normalized_ratio<F: Real>(det: LogValue<F>, n: u64) -> LogValue<F> {
    assert!(n >= 1, "order must be positive");
    let nf = F::lit(n as f64);
    LogValue::from_parts(det.sign, det.log_abs - nf / F::lit(2.0) * nf.ln())
}

impl<F: Real> Mul for LogValue<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::zero();
        }
        LogValue { sign: self.sign * rhs.sign, log_abs: self.log_abs + rhs.log_abs }
    }
}

impl<F: Real> Div for LogValue<F> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(rhs.sign != 0, "division by zero LogValue");
        if self.sign == 0 {
            return Self::zero();
        }
        LogValue { sign: self.sign * rhs.sign, log_abs: self.log_abs - rhs.log_abs }
    }
}

impl<F: Real> PartialOrd for LogValue<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Some(Ordering::Equal),
                1 => self.log_abs.partial_cmp(&other.log_abs),
                _ => other.log_abs.partial_cmp(&self.log_abs),
            },
            ord => Some(ord),
        }
    }
}

/// `ln |x|` for an arbitrary-size integer, accurate to double precision.
pub fn ln_abs_bigint(x: &BigInt) -> f64 {
    let mag = x.magnitude();
    let bits = mag.bits();
    if bits <= 1000 {
        return mag.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (mag >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}
