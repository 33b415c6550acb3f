//! Exact lower-triangular matrices.
//!
//! This layer shares no code with the series layer; products and inverses
//! here are computed entry by entry, which is what makes it usable as an
//! oracle for the series-level group operations.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalars::{LinExpr, Rational, Scalar};

/// `n × n` lower-triangular matrix; row `i` stores entries `0..=i`.
#[derive(Clone, PartialEq, Eq)]
pub struct TriMatrix<S: Scalar = Rational> {
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> TriMatrix<S> {
    pub fn from_fn(n: usize, mut entry: impl FnMut(usize, usize) -> S) -> Self {
        TriMatrix { rows: (0..n).map(|i| (0..=i).map(|j| entry(i, j)).collect()).collect() }
    }

    /// Builds from full rows; entries above the diagonal must be zero.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        let mut out = Vec::with_capacity(n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(row.len(), n));
            }
            if row[i + 1..].iter().any(|c| !c.is_zero()) {
                return Err(Error::InvalidElement(format!("row {i} has entries above the diagonal")));
            }
            out.push(row.into_iter().take(i + 1).collect());
        }
        Ok(TriMatrix { rows: out })
    }

    /// Column `k` is `columns[k]`, truncated to the rows on or below the diagonal.
    pub fn from_columns(n: usize, columns: &[Vec<S>]) -> Result<Self> {
        if columns.len() < n {
            return Err(Error::DimensionMismatch(columns.len(), n));
        }
        for (k, col) in columns.iter().enumerate().take(n) {
            if col.len() < n {
                return Err(Error::Precision { needed: n, have: col.len() });
            }
            if col[..k].iter().any(|c| !c.is_zero()) {
                return Err(Error::InvalidElement(format!("column {k} has entries above the diagonal")));
            }
        }
        Ok(Self::from_fn(n, |i, j| columns[j][i].clone()))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    /// `diag(1, -1, 1, -1, ...)`.
    pub fn alternating(n: usize) -> Self {
        Self::from_fn(n, |i, j| match (i == j, i % 2) {
            (false, _) => S::zero(),
            (true, 0) => S::one(),
            (true, _) => S::one().negated(),
        })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Entry `(i, j)`; `None` above the diagonal or out of range.
    pub fn get(&self, i: usize, j: usize) -> Option<&S> {
        self.rows.get(i).and_then(|r| r.get(j))
    }

    /// Entry `(i, j)` with zeros above the diagonal.
    pub fn at(&self, i: usize, j: usize) -> S {
        self.get(i, j).cloned().unwrap_or_else(S::zero)
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.dim()).map(|i| self.at(i, j)).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = Vec<S>> + '_ {
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.at(i, j)).collect())
    }

    pub fn leading(&self, n: usize) -> Self {
        TriMatrix { rows: self.rows.iter().take(n).cloned().collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.dim();
        if other.dim() != n {
            return Err(Error::DimensionMismatch(n, other.dim()));
        }
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(i + 1);
            for j in 0..=i {
                let mut acc = S::zero();
                for k in j..=i {
                    let a = &self.rows[i][k];
                    let b = &other.rows[k][j];
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.plus(&a.try_mul(b)?);
                    }
                }
                row.push(acc);
            }
            rows.push(row);
        }
        Ok(TriMatrix { rows })
    }

    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() < self.dim() {
            return Err(Error::DimensionMismatch(v.len(), self.dim()));
        }
        self.rows
            .iter()
            .map(|row| {
                row.iter().zip(v).try_fold(S::zero(), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        Ok(acc)
                    } else {
                        Ok(acc.plus(&a.try_mul(b)?))
                    }
                })
            })
            .collect()
    }

    /// Inverse by forward substitution, one column at a time. Every diagonal
    /// entry must be a nonzero constant.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim();
        let mut diag_inv = Vec::with_capacity(n);
        for i in 0..n {
            let d = self.rows[i][i].as_constant().filter(|d| !d.is_zero()).ok_or(Error::SingularDiagonal(i))?;
            diag_inv.push(d.recip()?);
        }
        let mut inv: Vec<Vec<S>> = (0..n).map(|i| vec![S::zero(); i + 1]).collect();
        for j in 0..n {
            inv[j][j] = S::from_rational(diag_inv[j].clone());
            for i in j + 1..n {
                let mut acc = S::zero();
                for k in j..i {
                    let a = &self.rows[i][k];
                    let x = &inv[k][j];
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.plus(&a.try_mul(x)?);
                    }
                }
                inv[i][j] = acc.scaled(&-&diag_inv[i]);
            }
        }
        Ok(TriMatrix { rows: inv })
    }

    /// Multiplies entry `(i, j)` by `(-1)^(i+j)`, i.e. `D̄ A D̄`.
    pub fn sign_conjugate(&self) -> Self {
        Self::from_fn(self.dim(), |i, j| {
            let a = &self.rows[i][j];
            if (i + j) % 2 == 1 { a.negated() } else { a.clone() }
        })
    }

    pub fn is_identity(&self) -> bool {
        self.first_difference(&Self::identity(self.dim())).is_none()
    }

    /// First entry, in row-major order, where `self` differs from `other`.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        for i in 0..self.dim().min(other.dim()) {
            for j in 0..=i {
                if self.rows[i][j] != other.rows[i][j] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TriMatrix<T> {
        TriMatrix { rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect() }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        self.rows().map(|r| r.iter().map(ToString::to_string).collect()).collect()
    }
}

impl TriMatrix<Rational> {
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&c| Rational::from(c)).collect()).collect())
    }

    pub fn lift<T: Scalar>(&self) -> TriMatrix<T> {
        self.map(|c| T::from_rational(c.clone()))
    }
}

impl TriMatrix<LinExpr> {
    pub fn eval(&self, values: &BTreeMap<String, Rational>) -> Result<TriMatrix<Rational>> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| c.eval(values)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(TriMatrix { rows })
    }
}

/// Right-aligned columns, one row per line.
impl<S: Scalar> fmt::Display for TriMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = self.to_string_rows();
        let n = self.dim();
        let widths: Vec<usize> =
            (0..n).map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(1)).collect();
        for row in &cells {
            let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            writeln!(f, "{}", line.join("  "))?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for TriMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f)?;
        fmt::Display::fmt(self, f)
    }
}

/// Array of arrays of scalar strings.
impl<S: Scalar> Serialize for TriMatrix<S> {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        self.to_string_rows().serialize(s)
    }
}
