//! Truncated formal power series.
//!
//! A [`Series`] stores exactly the coefficients that are known: `prec` is the
//! length of the coefficient vector and every operation returns the largest
//! precision it can certify. Nothing is ever padded with zeros, so a loss of
//! precision (from `shift_div`, `derivative`, division by a series with
//! positive valuation) is always visible in the result.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalars::{LinExpr, Rational, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Series<S: Scalar = Rational> {
    coeffs: Vec<S>,
}

fn leading_unit<S: Scalar>(c: &S) -> Result<Rational> {
    let c0 = c.as_constant().ok_or_else(|| Error::NonConstantLeading(c.to_string()))?;
    if c0.is_zero() {
        return Err(Error::NotAUnit);
    }
    Ok(c0)
}

/// Cauchy product truncated to `prec` terms.
fn convolve<S: Scalar>(a: &[S], b: &[S], prec: usize) -> Result<Vec<S>> {
    let mut out = vec![S::zero(); prec];
    for (i, ai) in a.iter().enumerate().take(prec) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(prec - i) {
            if bj.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].plus(&ai.try_mul(bj)?);
        }
    }
    Ok(out)
}

impl<S: Scalar> Series<S> {
    /// A series whose known coefficients are exactly `coeffs`.
    pub fn new(coeffs: Vec<S>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Precision { needed: 1, have: 0 });
        }
        Ok(Series { coeffs })
    }

    pub fn zero(prec: usize) -> Self {
        Series { coeffs: vec![S::zero(); prec.max(1)] }
    }

    pub fn constant(c: S, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        s.coeffs[0] = c;
        s
    }

    pub fn one(prec: usize) -> Self {
        Self::constant(S::one(), prec)
    }

    /// `x^k` known to `prec` coefficients.
    pub fn monomial(k: usize, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        if k < s.prec() {
            s.coeffs[k] = S::one();
        }
        s
    }

    pub fn x(prec: usize) -> Self {
        Self::monomial(1, prec)
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Option<&S> {
        self.coeffs.get(n)
    }

    /// Index of the first nonzero coefficient, or `prec` if none is known.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.prec())
    }

    pub fn truncate(&self, prec: usize) -> Self {
        let p = prec.clamp(1, self.prec());
        Series { coeffs: self.coeffs[..p].to_vec() }
    }

    /// Coefficient-wise equality on the common precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let p = self.prec().min(other.prec());
        self.coeffs[..p] == other.coeffs[..p]
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.prec().min(other.prec());
        Series { coeffs: (0..p).map(|i| self.coeffs[i].plus(&other.coeffs[i])).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.prec().min(other.prec());
        Series { coeffs: (0..p).map(|i| self.coeffs[i].minus(&other.coeffs[i])).collect() }
    }

    pub fn neg(&self) -> Self {
        Series { coeffs: self.coeffs.iter().map(Scalar::negated).collect() }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Series { coeffs: self.coeffs.iter().map(|c| c.scaled(k)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let p = self.prec().min(other.prec());
        Ok(Series { coeffs: convolve(&self.coeffs, &other.coeffs, p)? })
    }

    /// Multiplicative inverse; the constant term must be a nonzero constant.
    pub fn mul_invert(&self) -> Result<Self> {
        let inv0 = leading_unit(&self.coeffs[0])?.recip()?;
        let p = self.prec();
        let mut v: Vec<S> = Vec::with_capacity(p);
        v.push(S::from_rational(inv0.clone()));
        for n in 1..p {
            let mut acc = S::zero();
            for j in 1..=n {
                if !self.coeffs[j].is_zero() {
                    acc = acc.plus(&self.coeffs[j].try_mul(&v[n - j])?);
                }
            }
            v.push(acc.scaled(&-&inv0));
        }
        Ok(Series { coeffs: v })
    }

    /// `self ∘ inner`, by Horner's rule over truncated products.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::InnerConstantTerm);
        }
        let p = self.prec().min(inner.prec());
        let mut acc = vec![S::zero(); p];
        acc[0] = self.coeffs[p - 1].clone();
        for k in (0..p - 1).rev() {
            acc = convolve(&acc, &inner.coeffs, p)?;
            acc[0] = acc[0].plus(&self.coeffs[k]);
        }
        Ok(Series { coeffs: acc })
    }

    /// Compositional inverse, solved coefficient by coefficient from
    /// `[x^n] Σ b_k f^k = [x^n] x` against the powers of `f`.
    pub fn comp_inverse(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::InnerConstantTerm);
        }
        let p = self.prec();
        if p < 2 {
            return Err(Error::Precision { needed: 2, have: p });
        }
        let f1 = self.coeffs[1]
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or(Error::NotCompositionallyInvertible)?;
        let mut powers: Vec<Vec<S>> = Vec::with_capacity(p);
        powers.push(Series::<S>::one(p).coeffs);
        for k in 1..p {
            let next = convolve(&powers[k - 1], &self.coeffs, p)?;
            powers.push(next);
        }
        let mut b = vec![S::zero(); p];
        let mut lead = Rational::one();
        for n in 1..p {
            lead = &lead * &f1;
            let mut rhs = if n == 1 { S::one() } else { S::zero() };
            for k in 1..n {
                if !b[k].is_zero() && !powers[k][n].is_zero() {
                    rhs = rhs.minus(&b[k].try_mul(&powers[k][n])?);
                }
            }
            b[n] = rhs.scaled(&lead.recip()?);
        }
        Ok(Series { coeffs: b })
    }

    /// Square root with constant term 1; requires `u₀ = 1`.
    pub fn sqrt(&self) -> Result<Self> {
        match self.coeffs[0].as_constant() {
            Some(c) if c.is_one() => {}
            _ => return Err(Error::SqrtLeading(self.coeffs[0].to_string())),
        }
        let half = Rational::new(1, 2)?;
        let p = self.prec();
        let mut s = vec![S::zero(); p];
        s[0] = S::one();
        for n in 1..p {
            let mut acc = self.coeffs[n].clone();
            for j in 1..n {
                if !s[j].is_zero() && !s[n - j].is_zero() {
                    acc = acc.minus(&s[j].try_mul(&s[n - j])?);
                }
            }
            s[n] = acc.scaled(&half);
        }
        Ok(Series { coeffs: s })
    }

    pub fn derivative(&self) -> Result<Self> {
        let p = self.prec();
        if p < 2 {
            return Err(Error::Precision { needed: 2, have: p });
        }
        Ok(Series {
            coeffs: (1..p).map(|n| self.coeffs[n].scaled(&Rational::from(n as i64))).collect(),
        })
    }

    /// Integer power; negative exponents go through [`Series::mul_invert`].
    pub fn pow_int(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.mul_invert()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut result = Series::one(self.prec());
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

    /// Power with an exponent of denominator 1 or 2. Half-integer exponents
    /// need `u₀ = 1`.
    pub fn pow_rational(&self, e: &Rational) -> Result<Self> {
        let numer = || {
            i64::try_from(e.numer()).map_err(|_| Error::BadExponent(e.to_string()))
        };
        if e.is_integer() {
            self.pow_int(numer()?)
        } else if e.denom() == &2.into() {
            self.sqrt()?.pow_int(numer()?)
        } else {
            Err(Error::BadExponent(e.to_string()))
        }
    }

    /// `u / x^k`; the first `k` coefficients must be zero.
    pub fn shift_div(&self, k: usize) -> Result<Self> {
        let p = self.prec();
        if self.coeffs[..k.min(p)].iter().any(|c| !c.is_zero()) {
            return Err(Error::NotDivisible(k));
        }
        if k >= p {
            return Err(Error::Precision { needed: k + 1, have: p });
        }
        Ok(Series { coeffs: self.coeffs[k..].to_vec() })
    }

    /// `u · x^k`; certified precision grows by `k`.
    pub fn shift_mul(&self, k: usize) -> Self {
        let mut coeffs = vec![S::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Series { coeffs }
    }

    /// `self / den` with cancellation of a common power of `x`.
    pub fn div(&self, den: &Self) -> Result<Self> {
        let v = den.valuation();
        if v >= den.prec() {
            return Err(Error::Precision { needed: den.prec() + 1, have: den.prec() });
        }
        if v > 0 {
            if self.coeffs[..v.min(self.prec())].iter().any(|c| !c.is_zero()) {
                return Err(Error::Pole);
            }
            if self.prec() <= v {
                return Err(Error::Precision { needed: v + 1, have: self.prec() });
            }
        }
        let num = self.shift_div(v)?;
        let den = den.shift_div(v)?;
        num.mul(&den.mul_invert()?)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Series<T> {
        Series { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

impl Series<Rational> {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Series::new(coeffs.iter().map(|&c| Rational::from(c)).collect()).expect("nonempty coefficient list")
    }

    /// Lifts into another coefficient domain.
    pub fn lift<T: Scalar>(&self) -> Series<T> {
        self.map(|c| T::from_rational(c.clone()))
    }

    /// True when every known coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(Rational::is_integer)
    }
}

impl Series<LinExpr> {
    /// Substitutes concrete values for every unknown.
    pub fn eval(&self, values: &BTreeMap<String, Rational>) -> Result<Series<Rational>> {
        Ok(Series { coeffs: self.coeffs.iter().map(|c| c.eval(values)).collect::<Result<_>>()? })
    }

    pub fn substitute(&self, bindings: &BTreeMap<String, LinExpr>) -> Series<LinExpr> {
        self.map(|c| c.substitute(bindings))
    }
}

impl<S: Scalar> fmt::Display for Series<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "] (prec {})", self.prec())
    }
}

impl<S: Scalar> fmt::Debug for Series<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `{"coeffs": ["1", "0", "2"], "prec": 3}`, scalars as strings.
impl<S: Scalar> Serialize for Series<S> {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let coeffs: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        let mut st = s.serialize_struct("Series", 2)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.serialize_field("prec", &self.prec())?;
        st.end()
    }
}
