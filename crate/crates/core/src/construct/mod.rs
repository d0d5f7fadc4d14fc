//! Explicit Hadamard and conference matrices.
//!
//! A [`QuasiOrthogonal`] matrix `Q` has entries in `{-1, 0, +1}` and satisfies
//! `Q Q^T = k I`: Hadamard matrices have `k = m` and no zeros, conference
//! matrices have `k = m - 1` and a zero diagonal. Rows and columns are stored
//! bit-packed so that products with `±1` vectors are popcounts.

mod paley;
mod recipe;

pub use paley::{paley_conference, paley_one, paley_two};
pub use recipe::{largest_conference_at_most, nearest_hadamard_order, Base, Method, Recipe, Step};

use serde::{Deserialize, Serialize};

use crate::bits::PackedSigns;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Hadamard,
    Conference,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Hadamard => "hadamard",
            Kind::Conference => "conference",
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuasiOrthogonal {
    order: usize,
    kind: Kind,
    // Diagonal of a conference matrix is stored as +1 and corrected for in
    // every product.
    rows: Vec<PackedSigns>,
    cols: Vec<PackedSigns>,
    recipe: Option<Recipe>,
}

impl QuasiOrthogonal {
    /// Build from an entry function, checking the kind's entry pattern (not
    /// orthogonality; see [`QuasiOrthogonal::validate`]).
    pub fn from_fn(kind: Kind, order: usize, entry: impl Fn(usize, usize) -> i8) -> Result<Self> {
        if order == 0 {
            return Err(Error::Precondition("order must be positive".into()));
        }
        let check = |i: usize, j: usize| -> Result<bool> {
            let v = entry(i, j);
            let ok = match (kind, i == j) {
                (Kind::Conference, true) => v == 0,
                _ => v == 1 || v == -1,
            };
            if ok {
                Ok(v < 0)
            } else {
                Err(Error::InvalidEntry { row: i, col: j, value: v as i64 })
            }
        };
        let mut rows = Vec::with_capacity(order);
        for i in 0..order {
            let mut failure = None;
            let row = PackedSigns::from_fn(order, |j| match check(i, j) {
                Ok(neg) => neg,
                Err(e) => {
                    failure.get_or_insert(e);
                    false
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
            rows.push(row);
        }
        let cols = (0..order)
            .map(|j| PackedSigns::from_fn(order, |i| rows[i].get(j) < 0))
            .collect();
        Ok(QuasiOrthogonal { order, kind, rows, cols, recipe: None })
    }

    pub fn from_entries(kind: Kind, order: usize, entries: &[i8]) -> Result<Self> {
        if entries.len() != order * order {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for order {order}",
                entries.len()
            )));
        }
        Self::from_fn(kind, order, |i, j| entries[i * order + j])
    }

    /// The order-1 Hadamard matrix `[[1]]`.
    pub fn unit() -> Self {
        Self::from_fn(Kind::Hadamard, 1, |_, _| 1).expect("unit matrix")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// The scalar `k` in `Q Q^T = k I`.
    pub fn weight(&self) -> u64 {
        match self.kind {
            Kind::Hadamard => self.order as u64,
            Kind::Conference => self.order as u64 - 1,
        }
    }

    pub fn recipe(&self) -> Option<&Recipe> {
        self.recipe.as_ref()
    }

    pub(crate) fn with_recipe(mut self, recipe: Recipe) -> Self {
        self.recipe = Some(recipe);
        self
    }

    pub fn entry(&self, i: usize, j: usize) -> i8 {
        if self.kind == Kind::Conference && i == j {
            0
        } else {
            self.rows[i].get(j)
        }
    }

    pub fn to_matrix<T: From<i8>>(&self) -> Matrix<T> {
        Matrix::from_fn(self.order, self.order, |i, j| T::from(self.entry(i, j)))
    }

    /// `sum_l Q[i][l] x[l]`.
    pub fn row_dot(&self, i: usize, x: &PackedSigns) -> i64 {
        let raw = self.rows[i].dot(x);
        match self.kind {
            Kind::Hadamard => raw,
            Kind::Conference => raw - x.get(i) as i64,
        }
    }

    /// `sum_l x[l] Q[l][j]`.
    pub fn col_dot(&self, j: usize, x: &PackedSigns) -> i64 {
        let raw = self.cols[j].dot(x);
        match self.kind {
            Kind::Hadamard => raw,
            Kind::Conference => raw - x.get(j) as i64,
        }
    }

    /// True iff `Q Q^T = k I` exactly and the entry pattern matches the kind.
    pub fn validate(&self) -> bool {
        let m = self.order;
        let k = self.weight() as i64;
        for i in 0..m {
            if self.kind == Kind::Conference && self.rows[i].get(i) != 1 {
                return false;
            }
            for j in i..m {
                let mut g = self.rows[i].dot(&self.rows[j]);
                if self.kind == Kind::Conference {
                    g -= if i == j { 1 } else { (self.rows[j].get(i) + self.rows[i].get(j)) as i64 };
                }
                let want = if i == j { k } else { 0 };
                if g != want {
                    return false;
                }
            }
        }
        true
    }

    /// Sylvester doubling `[[Q, Q], [Q, -Q]]`.
    pub fn sylvester_double(&self) -> Result<Self> {
        if self.kind != Kind::Hadamard {
            return Err(Error::Precondition("Sylvester doubling needs a Hadamard matrix".into()));
        }
        let m = self.order;
        let mut rows = Vec::with_capacity(2 * m);
        for i in 0..2 * m {
            let src = &self.rows[i % m];
            let flip = i >= m;
            rows.push(PackedSigns::from_fn(2 * m, |j| {
                let neg = src.get(j % m) < 0;
                if flip && j >= m {
                    !neg
                } else {
                    neg
                }
            }));
        }
        let cols = (0..2 * m)
            .map(|j| PackedSigns::from_fn(2 * m, |i| rows[i].get(j) < 0))
            .collect();
        let recipe = self.recipe.clone().map(|mut r| {
            r.steps.push(Step::Double);
            r
        });
        Ok(QuasiOrthogonal { order: 2 * m, kind: Kind::Hadamard, rows, cols, recipe })
    }

    /// Kronecker product of two Hadamard matrices.
    pub fn kronecker(&self, other: &QuasiOrthogonal) -> Result<Self> {
        if self.kind != Kind::Hadamard || other.kind != Kind::Hadamard {
            return Err(Error::Precondition("Kronecker product needs two Hadamard matrices".into()));
        }
        let m2 = other.order;
        let q = Self::from_fn(Kind::Hadamard, self.order * m2, |i, j| {
            self.entry(i / m2, j / m2) * other.entry(i % m2, j % m2)
        })?;
        let recipe = match (&self.recipe, &other.recipe) {
            (Some(a), Some(b)) => {
                let mut r = a.clone();
                r.steps.push(Step::Kron(Box::new(b.clone())));
                Some(r)
            }
            _ => None,
        };
        Ok(QuasiOrthogonal { recipe, ..q })
    }
}
