//! Scalar abstractions.
//!
//! Exact routines (fraction-free elimination) are generic over [`ExactInt`],
//! an integral domain with checked arithmetic so that fixed-width integers can
//! report overflow and callers can retry with [`num_bigint::BigInt`].
//! Floating-point routines are generic over [`Real`] (`f32` or `f64`).

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Float, FromPrimitive, One, Zero};

/// An exact integer type usable for fraction-free elimination.
///
/// Every checked operation returns `None` on overflow; for `BigInt` they
/// never fail.
pub trait ExactInt:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + CheckedDiv
{
    fn from_i64(value: i64) -> Self;
    fn to_bigint(&self) -> BigInt;
}

impl ExactInt for i64 {
    fn from_i64(value: i64) -> Self {
        value
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ExactInt for i128 {
    fn from_i64(value: i64) -> Self {
        value as i128
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ExactInt for BigInt {
    fn from_i64(value: i64) -> Self {
        BigInt::from(value)
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// Floating-point scalar: f32 or f64.
pub trait Real: Float + FromPrimitive + Debug + Send + Sync + 'static {
    /// Convert an `f64` constant, panicking only on non-representable input.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("constant representable in Real type")
    }
}

impl Real for f32 {}
impl Real for f64 {}
