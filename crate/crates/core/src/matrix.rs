//! Dense row-major matrices over an arbitrary scalar, and the validated
//! `{-1, +1}` sign matrix used for border blocks.

use std::fmt;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Matrix<T>
    where
        T: Clone,
    {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
}

impl<T: Zero + One + Clone> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T: Zero + Clone> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + Add<Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    /// Exact product `self * rhs`.
    pub fn matmul(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::<T>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    let prod = a * rhs.get(l, j);
                    out.data[idx] = out.data[idx].clone() + prod;
                }
            }
        }
        Ok(out)
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// A matrix whose entries are exactly `-1` or `+1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignMatrix(Matrix<i8>);

impl SignMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i8>) -> Result<Self> {
        let m = Matrix::new(rows, cols, entries)?;
        for i in 0..rows {
            for j in 0..cols {
                let v = *m.get(i, j);
                if v != 1 && v != -1 {
                    return Err(Error::InvalidEntry { row: i, col: j, value: v as i64 });
                }
            }
        }
        Ok(SignMatrix(m))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        SignMatrix(Matrix::from_fn(rows, cols, |i, j| if f(i, j) { 1 } else { -1 }))
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        *self.0.get(i, j)
    }

    /// Flip the sign of one entry.
    pub fn flip(&mut self, i: usize, j: usize) {
        let v = self.get(i, j);
        self.0.set(i, j, -v);
    }

    pub fn set(&mut self, i: usize, j: usize, positive: bool) {
        self.0.set(i, j, if positive { 1 } else { -1 });
    }

    pub fn transpose(&self) -> SignMatrix {
        SignMatrix(self.0.transpose())
    }

    pub fn as_matrix(&self) -> &Matrix<i8> {
        &self.0
    }

    pub fn to_int<T: From<i8>>(&self) -> Matrix<T> {
        self.0.map(|&v| T::from(v))
    }

    /// Rows rendered as `+`/`-` strings.
    pub fn to_row_strings(&self) -> Vec<String> {
        (0..self.rows())
            .map(|i| self.0.row(i).iter().map(|&v| if v > 0 { '+' } else { '-' }).collect())
            .collect()
    }

    pub fn from_row_strings(rows: &[String]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.chars().count());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.chars().count() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} signs, expected {cols}",
                    row.chars().count()
                )));
            }
            for (j, ch) in row.chars().enumerate() {
                entries.push(match ch {
                    '+' => 1,
                    '-' => -1,
                    _ => return Err(Error::InvalidEntry { row: i, col: j, value: ch as i64 }),
                });
            }
        }
        SignMatrix::new(rows.len(), cols, entries)
    }
}
