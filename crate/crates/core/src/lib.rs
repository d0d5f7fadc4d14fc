//! Certified lower bounds on the maximal determinant of `±1` matrices.

pub mod bits;
pub mod border;
pub mod bounds;
pub mod construct;
pub mod det;
pub mod error;
pub mod logscalar;
pub mod matrix;
pub mod primes;
pub mod scalar;
pub mod sieve;

pub use error::{Error, Result};

/// Exact integer matrix.
pub type IntMatrix = matrix::Matrix<num_bigint::BigInt>;
/// Double-precision matrix.
pub type RealMatrix = matrix::Matrix<f64>;
/// Sign and log-magnitude in double precision.
pub type LogScalar = logscalar::LogValue<f64>;
/// Exact rational.
pub type Rational = num_rational::BigRational;
