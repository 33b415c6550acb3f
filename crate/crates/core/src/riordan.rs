//! Riordan arrays `(g, f)`: the matrix with `T[n][k] = [x^n] g f^k`.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::Rational;
use crate::series::Series;
use crate::trimat::TriMatrix;

#[derive(Clone, PartialEq)]
pub struct RiordanArray {
    g: Series,
    f: Series,
}

/// Checks shared by Riordan and almost-Riordan elements.
pub(crate) fn validate_pair(g: &Series, f: &Series) -> Result<()> {
    if g.coeffs()[0].is_zero() {
        return Err(Error::InvalidElement("g must have nonzero constant term (g₀ = 0)".into()));
    }
    if !f.coeffs()[0].is_zero() {
        return Err(Error::InvalidElement("f must have zero constant term".into()));
    }
    match f.coeff(1) {
        None => Err(Error::Precision { needed: 2, have: f.prec() }),
        Some(c) if c.is_zero() => Err(Error::InvalidElement("f must have nonzero coefficient of x (f₁ = 0)".into())),
        Some(_) => Ok(()),
    }
}

pub(crate) fn pair_warnings(g: &Series, f: &Series) -> Vec<String> {
    let mut out = Vec::new();
    let g0 = &g.coeffs()[0];
    if !g0.is_one() {
        out.push(format!("g₀ = {g0}, not normalized to 1"));
    }
    if let Some(f1) = f.coeff(1) {
        if !f1.abs().is_one() {
            out.push(format!("f₁ = {f1}, not ±1"));
        }
    }
    out
}

impl RiordanArray {
    /// Validates `g₀ ≠ 0`, `f₀ = 0`, `f₁ ≠ 0`; both series are cut to their
    /// common precision.
    pub fn new(g: Series, f: Series) -> Result<Self> {
        let p = g.prec().min(f.prec());
        let (g, f) = (g.truncate(p), f.truncate(p));
        validate_pair(&g, &f)?;
        Ok(RiordanArray { g, f })
    }

    pub fn identity(prec: usize) -> Self {
        let p = prec.max(2);
        RiordanArray { g: Series::one(p), f: Series::x(p) }
    }

    /// Normalization notes (`g₀ ≠ 1`, `f₁ ∉ {1, -1}`); such elements are still valid.
    pub fn warnings(&self) -> Vec<String> {
        pair_warnings(&self.g, &self.f)
    }

    pub fn g(&self) -> &Series {
        &self.g
    }

    pub fn f(&self) -> &Series {
        &self.f
    }

    pub fn prec(&self) -> usize {
        self.g.prec()
    }

    pub fn truncate(&self, prec: usize) -> Self {
        RiordanArray { g: self.g.truncate(prec.max(2)), f: self.f.truncate(prec.max(2)) }
    }

    /// Equality of `(g, f)` on the common precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.g.agrees_with(&other.g) && self.f.agrees_with(&other.f)
    }

    /// The `n × n` matrix whose column `k` holds the coefficients of `g f^k`.
    pub fn to_matrix(&self, n: usize) -> Result<TriMatrix> {
        if self.prec() < n {
            return Err(Error::Precision { needed: n, have: self.prec() });
        }
        let g = self.g.truncate(n);
        let f = self.f.truncate(n);
        let mut columns = Vec::with_capacity(n);
        let mut col = g;
        for _ in 0..n {
            columns.push(col.coeffs().to_vec());
            col = col.mul(&f)?;
        }
        TriMatrix::from_columns(n, &columns)
    }

    /// `(g, f)·(u, v) = (g·u(f), v(f))`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let g = self.g.mul(&other.g.compose(&self.f)?)?;
        let f = other.f.compose(&self.f)?;
        RiordanArray::new(g, f)
    }

    /// `(g, f)⁻¹ = (1/g(f̄), f̄)`.
    pub fn inverse(&self) -> Result<Self> {
        let fbar = self.f.comp_inverse()?;
        let g = self.g.compose(&fbar)?.mul_invert()?;
        RiordanArray::new(g, fbar)
    }

    pub fn pow(&self, p: i64) -> Result<Self> {
        let base = if p < 0 { self.inverse()? } else { self.clone() };
        let mut n = p.unsigned_abs();
        let mut result = RiordanArray::identity(self.prec());
        let mut square = base;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&square)?;
            }
            n >>= 1;
            if n > 0 {
                square = square.mul(&square)?;
            }
        }
        Ok(result)
    }

    /// Fundamental theorem: `(g, f) h = g · h(f)`.
    pub fn apply(&self, h: &Series) -> Result<Series> {
        self.g.mul(&h.compose(&self.f)?)
    }

    pub fn is_integral(&self) -> bool {
        self.g.is_integral() && self.f.is_integral()
    }

    pub fn g0(&self) -> &Rational {
        &self.g.coeffs()[0]
    }
}

impl fmt::Display for RiordanArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "g: {}", self.g)?;
        write!(f, "f: {}", self.f)
    }
}

impl fmt::Debug for RiordanArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RiordanArray(g={}, f={})", self.g, self.f)
    }
}
