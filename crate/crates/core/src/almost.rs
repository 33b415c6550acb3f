//! Almost-Riordan arrays of order `m`: `(a⁽⁰⁾, …, a⁽ᵐ⁻¹⁾; g, f)`.
//!
//! Column `k < m` of the matrix is `x^k a⁽ᵏ⁾`; column `k ≥ m` is
//! `x^m g f^(k-m)`. Order 0 is an ordinary Riordan array.
//!
//! Orders 1 and 2 use closed formulas for the action on a series, the
//! product and the inverse. Order 3 and above go through the matrix
//! realization and re-extract the components from its columns, which costs
//! `m` coefficients of precision per operation.

use std::fmt;

use crate::error::{Error, Result};
use crate::riordan::{pair_warnings, validate_pair, RiordanArray};
use crate::scalars::{Rational, Scalar};
use crate::series::Series;
use crate::trimat::TriMatrix;

#[derive(Clone, PartialEq)]
pub struct AlmostRiordan {
    prefix: Vec<Series>,
    g: Series,
    f: Series,
}

fn scale_lifted<S: Scalar>(series: &Series, k: &S) -> Result<Series<S>> {
    let coeffs = series.coeffs().iter().map(|c| k.try_mul(&S::from_rational(c.clone()))).collect::<Result<_>>()?;
    Series::new(coeffs)
}

fn tail<S: Scalar>(h: &Series<S>, k: usize) -> Result<Series<S>> {
    let mut coeffs = h.coeffs().to_vec();
    for c in coeffs.iter_mut().take(k) {
        *c = S::zero();
    }
    Series::new(coeffs)?.shift_div(k)
}

impl AlmostRiordan {
    /// All components are cut to their common precision.
    pub fn new(prefix: Vec<Series>, g: Series, f: Series) -> Result<Self> {
        let p = prefix.iter().map(Series::prec).chain([g.prec(), f.prec()]).min().unwrap_or(1);
        let prefix: Vec<Series> = prefix.iter().map(|a| a.truncate(p)).collect();
        let (g, f) = (g.truncate(p), f.truncate(p));
        validate_pair(&g, &f)?;
        for (i, a) in prefix.iter().enumerate() {
            if a.coeffs()[0].is_zero() {
                return Err(Error::InvalidElement(format!("prefix series {i} must have nonzero constant term")));
            }
        }
        Ok(AlmostRiordan { prefix, g, f })
    }

    pub fn from_riordan(r: &RiordanArray) -> Self {
        AlmostRiordan { prefix: Vec::new(), g: r.g().clone(), f: r.f().clone() }
    }

    /// `(1, …, 1; 1, x)`, whose matrix is the identity.
    pub fn identity(order: usize, prec: usize) -> Self {
        let p = prec.max(2);
        AlmostRiordan { prefix: vec![Series::one(p); order], g: Series::one(p), f: Series::x(p) }
    }

    pub fn order(&self) -> usize {
        self.prefix.len()
    }

    pub fn prefix(&self) -> &[Series] {
        &self.prefix
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

    pub fn riordan_part(&self) -> RiordanArray {
        RiordanArray::new(self.g.clone(), self.f.clone()).expect("validated on construction")
    }

    pub fn truncate(&self, prec: usize) -> Self {
        let p = prec.max(2);
        AlmostRiordan {
            prefix: self.prefix.iter().map(|a| a.truncate(p)).collect(),
            g: self.g.truncate(p),
            f: self.f.truncate(p),
        }
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .prefix
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.coeffs()[0].is_one())
            .map(|(i, a)| format!("prefix {i} has constant term {}, not normalized to 1", a.coeffs()[0]))
            .collect();
        out.extend(pair_warnings(&self.g, &self.f));
        out
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.order() == other.order()
            && self.prefix.iter().zip(&other.prefix).all(|(a, b)| a.agrees_with(b))
            && self.g.agrees_with(&other.g)
            && self.f.agrees_with(&other.f)
    }

    pub fn to_matrix(&self, n: usize) -> Result<TriMatrix> {
        if self.prec() < n {
            return Err(Error::Precision { needed: n, have: self.prec() });
        }
        let m = self.order();
        let mut columns = Vec::with_capacity(n);
        for (k, a) in self.prefix.iter().enumerate().take(n) {
            columns.push(a.shift_mul(k).truncate(n).coeffs().to_vec());
        }
        if n > m {
            let f = self.f.truncate(n);
            let mut col = self.g.shift_mul(m).truncate(n);
            for _ in m..n {
                columns.push(col.coeffs().to_vec());
                col = col.mul(&f)?;
            }
        }
        TriMatrix::from_columns(n, &columns)
    }

    /// Reads an order-`m` element back from its matrix. Needs `n ≥ m + 3`;
    /// the result is certified to `n - m` coefficients.
    pub fn from_matrix(matrix: &TriMatrix, order: usize) -> Result<Self> {
        let n = matrix.dim();
        if n < order + 3 {
            return Err(Error::Precision { needed: order + 3, have: n });
        }
        let column = |k: usize| Series::new(matrix.column(k)).and_then(|c| c.shift_div(k.min(order)));
        let prefix = (0..order).map(column).collect::<Result<Vec<_>>>()?;
        let g = column(order)?;
        let gf = column(order + 1)?;
        let f = gf.mul(&g.mul_invert()?)?;
        AlmostRiordan::new(prefix, g, f)
    }

    /// Action on a series. For `m ≤ 2`:
    ///
    /// * `(g, f) h = g h(f)`
    /// * `(a; g, f) h = h₀ a + x g h̃(f)` with `h̃ = (h - h₀)/x`
    /// * `(a, b; g, f) h = h₀ a + h₁ x b + x² g h̃̃(f)` with `h̃̃ = (h - h₀ - h₁x)/x²`
    ///
    /// Higher orders multiply by the matrix.
    pub fn apply<S: Scalar>(&self, h: &Series<S>) -> Result<Series<S>> {
        let m = self.order();
        if m >= 3 {
            let n = self.prec().min(h.prec());
            let out = self.to_matrix(n)?.lift::<S>().mul_vec(h.coeffs())?;
            return Series::new(out);
        }
        let p = self.prec().min(h.prec());
        let h = h.truncate(p);
        let g: Series<S> = self.g.truncate(p).lift();
        let f: Series<S> = self.f.truncate(p).lift();
        let rest = if p > m {
            g.mul(&tail(&h, m)?.compose(&f)?)?.shift_mul(m).truncate(p)
        } else {
            Series::zero(p)
        };
        let mut out = rest;
        for (k, a) in self.prefix.iter().enumerate() {
            let hk = h.coeffs()[k].clone();
            if !hk.is_zero() {
                out = out.add(&scale_lifted(&a.truncate(p), &hk)?.shift_mul(k));
            }
        }
        Ok(out.truncate(p))
    }

    /// `(a; g, f)(b; u, v) = ((a; g, f) b; g u(f), v(f))`; order 2 in the
    /// same way column by column, higher orders through the matrix.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let m = self.order();
        if other.order() != m {
            return Err(Error::OrderMismatch(m, other.order()));
        }
        let interior = self.riordan_part().mul(&other.riordan_part())?;
        match m {
            0 => Ok(AlmostRiordan::from_riordan(&interior)),
            1 => {
                let a = self.apply(&other.prefix[0])?;
                AlmostRiordan::new(vec![a], interior.g().clone(), interior.f().clone())
            }
            2 => {
                let a = self.apply(&other.prefix[0])?;
                let tail_elem = AlmostRiordan::new(vec![self.prefix[1].clone()], self.g.clone(), self.f.clone())?;
                let b = tail_elem.apply(&other.prefix[1])?;
                AlmostRiordan::new(vec![a, b], interior.g().clone(), interior.f().clone())
            }
            _ => self.mul_via_matrix(other),
        }
    }

    pub fn mul_via_matrix(&self, other: &Self) -> Result<Self> {
        let n = self.prec().min(other.prec());
        let product = self.to_matrix(n)?.mul(&other.to_matrix(n)?)?;
        AlmostRiordan::from_matrix(&product, self.order())
    }

    /// Inverse. With `G = 1/g(f̄)`:
    ///
    /// * order 1: `(a; g, f)⁻¹ = (a*; G, f̄)`, `a* = (1; -G, f̄) a`
    /// * order 2: `b* = (1; -G, f̄) b`, `a** = (1, -b*; -G, f̄) a`
    ///
    /// When a prefix series has constant term `c ≠ 1` the result is
    /// `(1 + (applied - c)) / c`, which reduces to the above for `c = 1`.
    pub fn inverse(&self) -> Result<Self> {
        let m = self.order();
        if m >= 3 {
            return self.inverse_via_matrix();
        }
        let interior = self.riordan_part().inverse()?;
        let (big_g, fbar) = (interior.g().clone(), interior.f().clone());
        let p = interior.prec();
        let normalize = |applied: Series, c0: &Rational| -> Result<Series> {
            let shifted = applied.sub(&Series::constant(c0.clone(), p)).add(&Series::one(p));
            Ok(shifted.scale(&c0.recip()?))
        };
        match m {
            0 => Ok(AlmostRiordan::from_riordan(&interior)),
            1 => {
                let a = &self.prefix[0];
                let op = AlmostRiordan::new(vec![Series::one(p)], big_g.neg(), fbar.clone())?;
                let a_star = normalize(op.apply(a)?, &a.coeffs()[0])?;
                AlmostRiordan::new(vec![a_star], big_g, fbar)
            }
            _ => {
                let (a, b) = (&self.prefix[0], &self.prefix[1]);
                let op1 = AlmostRiordan::new(vec![Series::one(p)], big_g.neg(), fbar.clone())?;
                let b_star = normalize(op1.apply(b)?, &b.coeffs()[0])?;
                let op2 = AlmostRiordan::new(vec![Series::one(p), b_star.neg()], big_g.neg(), fbar.clone())?;
                let a_star = normalize(op2.apply(a)?, &a.coeffs()[0])?;
                AlmostRiordan::new(vec![a_star, b_star], big_g, fbar)
            }
        }
    }

    pub fn inverse_via_matrix(&self) -> Result<Self> {
        let inv = self.to_matrix(self.prec())?.inverse()?;
        AlmostRiordan::from_matrix(&inv, self.order())
    }

    pub fn pow(&self, p: i64) -> Result<Self> {
        let base = if p < 0 { self.inverse()? } else { self.clone() };
        let mut n = p.unsigned_abs();
        let mut result = AlmostRiordan::identity(self.order(), base.prec());
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
}

impl fmt::Display for AlmostRiordan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.prefix.iter().enumerate() {
            writeln!(f, "prefix[{i}]: {a}")?;
        }
        writeln!(f, "g: {}", self.g)?;
        write!(f, "f: {}", self.f)
    }
}

impl fmt::Debug for AlmostRiordan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlmostRiordan(")?;
        for a in &self.prefix {
            write!(f, "{a}, ")?;
        }
        write!(f, "; g={}, f={})", self.g, self.f)
    }
}
