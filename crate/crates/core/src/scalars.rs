//! Exact coefficient domains.
//!
//! [`Rational`] is an arbitrary-precision fraction kept in lowest terms.
//! [`LinExpr`] is an affine form `c + k1*u1 + k2*u2 + ...` over named
//! unknowns, used to carry free parameters through series arithmetic. Both
//! implement [`Scalar`], the interface the series and matrix layers are
//! generic over.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number; always canonical (`gcd = 1`, positive denominator).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// The value as an `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn checked_div(&self, other: &Rational) -> Result<Rational> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &other.0))
    }

    pub fn recip(&self) -> Result<Rational> {
        Rational::one().checked_div(self)
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn pow(&self, e: i32) -> Result<Rational> {
        if e < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(num_traits::Pow::pow(&self.0, e)))
    }

    /// Exact square root when both numerator and denominator are perfect squares.
    pub fn sqrt(&self) -> Option<Rational> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(Rational(BigRational::new(n, d)))
        } else {
            None
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts `p`, `p/q` and finite decimals such as `-1.25`.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let bad = || Error::Syntax { pos: 0, msg: format!("not a rational number: `{text}`") };
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            return Rational::new(n, d);
        }
        if let Some((int, frac)) = t.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int.starts_with('-');
            let int_part: BigInt = match int {
                "" | "-" | "+" => BigInt::zero(),
                _ => int.parse().map_err(|_| bad())?,
            };
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
            let mut value = Rational::new(int_part.abs() * &scale + frac_part, scale)?;
            if negative {
                value = -value;
            }
            return Ok(value);
        }
        let n: BigInt = t.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(n))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// Binary operations of [`rat_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn rat_arith(a: &Rational, b: &Rational, op: RatOp) -> Result<Rational> {
    Ok(match op {
        RatOp::Add => a + b,
        RatOp::Sub => a - b,
        RatOp::Mul => a * b,
        RatOp::Div => a.checked_div(b)?,
    })
}

/// Affine expression `constant + Σ coeff·name`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LinExpr {
    constant: Rational,
    terms: BTreeMap<String, Rational>,
}

impl LinExpr {
    pub fn constant(c: Rational) -> Self {
        LinExpr { constant: c, terms: BTreeMap::new() }
    }

    /// The single unknown `name` with coefficient 1.
    pub fn unknown(name: impl Into<String>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(name.into(), Rational::one());
        LinExpr { constant: Rational::zero(), terms }
    }

    pub fn from_parts(constant: Rational, terms: impl IntoIterator<Item = (String, Rational)>) -> Self {
        let mut e = LinExpr::constant(constant);
        for (name, k) in terms {
            e.add_term(&name, &k);
        }
        e
    }

    fn add_term(&mut self, name: &str, k: &Rational) {
        if k.is_zero() {
            return;
        }
        let sum = match self.terms.get(name) {
            Some(old) => old + k,
            None => k.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(name);
        } else {
            self.terms.insert(name.to_string(), sum);
        }
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    pub fn terms(&self) -> &BTreeMap<String, Rational> {
        &self.terms
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn coeff(&self, name: &str) -> Rational {
        self.terms.get(name).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn unknowns(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().map(String::as_str)
    }

    pub fn add(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        out.constant = &out.constant + &other.constant;
        for (name, k) in &other.terms {
            out.add_term(name, k);
        }
        out
    }

    pub fn sub(&self, other: &LinExpr) -> LinExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LinExpr {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, k: &Rational) -> LinExpr {
        if k.is_zero() {
            return LinExpr::default();
        }
        LinExpr {
            constant: &self.constant * k,
            terms: self.terms.iter().map(|(n, c)| (n.clone(), c * k)).collect(),
        }
    }

    /// Product, defined only when at least one side is a constant.
    pub fn mul(&self, other: &LinExpr) -> Result<LinExpr> {
        if other.is_constant() {
            Ok(self.scale(&other.constant))
        } else if self.is_constant() {
            Ok(other.scale(&self.constant))
        } else {
            Err(Error::Nonlinear)
        }
    }

    /// Replaces each unknown found in `bindings` by its expression.
    pub fn substitute(&self, bindings: &BTreeMap<String, LinExpr>) -> LinExpr {
        let mut out = LinExpr::constant(self.constant.clone());
        for (name, k) in &self.terms {
            match bindings.get(name) {
                Some(e) => out = out.add(&e.scale(k)),
                None => out.add_term(name, k),
            }
        }
        out
    }

    /// Substitutes concrete values; every unknown must be assigned.
    pub fn eval(&self, values: &BTreeMap<String, Rational>) -> Result<Rational> {
        let mut acc = self.constant.clone();
        for (name, k) in &self.terms {
            let v = values.get(name).ok_or_else(|| Error::Unassigned(name.clone()))?;
            acc = acc + k * v;
        }
        Ok(acc)
    }
}

/// Solves `eq = 0` for `unknown`, returning the expression to substitute.
///
/// Fails with [`Error::FreeOrInconsistent`] when `unknown` does not occur in
/// `eq`; the caller decides whether that means free or inconsistent.
pub fn lin_solve(eq: &LinExpr, unknown: &str) -> Result<LinExpr> {
    let k = eq.coeff(unknown);
    if k.is_zero() {
        return Err(Error::FreeOrInconsistent(unknown.to_string()));
    }
    let mut rest = eq.clone();
    rest.terms.remove(unknown);
    Ok(rest.scale(&-k.recip()?))
}

impl From<Rational> for LinExpr {
    fn from(c: Rational) -> Self {
        LinExpr::constant(c)
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.constant.is_zero() || self.terms.is_empty() {
            write!(f, "{}", self.constant)?;
            first = false;
        }
        // Names with a numeric suffix sort by its value: u2 before u10.
        let mut terms: Vec<(&String, &Rational)> = self.terms.iter().collect();
        terms.sort_by_key(|(name, _)| {
            let stem = name.trim_end_matches(|c: char| c.is_ascii_digit());
            (stem, name[stem.len()..].parse::<u64>().ok(), name.as_str())
        });
        for (name, k) in terms {
            let magnitude = k.abs();
            match (first, k.is_negative()) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if magnitude.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{magnitude}*{name}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for LinExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Coefficient domain shared by series and matrices.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, k: &Rational) -> Self;
    fn try_mul(&self, other: &Self) -> Result<Self>;
    /// The value as a plain rational, if it has no symbolic part.
    fn as_constant(&self) -> Option<Rational>;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, k: &Rational) -> Self {
        self * k
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
    fn as_constant(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl Scalar for LinExpr {
    fn zero() -> Self {
        LinExpr::default()
    }
    fn one() -> Self {
        LinExpr::constant(Rational::one())
    }
    fn from_rational(r: Rational) -> Self {
        LinExpr::constant(r)
    }
    fn is_zero(&self) -> bool {
        LinExpr::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, k: &Rational) -> Self {
        self.scale(k)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }
    fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.constant.clone())
    }
}
