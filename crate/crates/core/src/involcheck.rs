//! Involution, pseudo-involution and quasi-involution tests on truncated
//! matrices, and constructors for the standard examples.
//!
//! Every predicate is a statement about the `N × N` leading block; reports
//! carry `N`.

use std::fmt;

use serde::Serialize;

use crate::almost::AlmostRiordan;
use crate::error::{Error, Result};
use crate::riordan::RiordanArray;
use crate::scalars::Rational;
use crate::series::Series;
use crate::trimat::TriMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    Involution,
    PseudoInvolution,
    QuasiInvolution,
    None,
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassKind::Involution => "involution",
            ClassKind::PseudoInvolution => "pseudo_involution",
            ClassKind::QuasiInvolution => "quasi_involution",
            ClassKind::None => "none",
        })
    }
}

/// First entry where a check failed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub row: usize,
    pub col: usize,
    pub expected: Rational,
    pub found: Rational,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}): expected {}, found {}", self.row, self.col, self.expected, self.found)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassReport {
    pub kind: ClassKind,
    pub dim: usize,
    pub witness: Option<Witness>,
}

impl ClassReport {
    fn pass(kind: ClassKind, dim: usize) -> Self {
        ClassReport { kind, dim, witness: None }
    }

    fn fail(dim: usize, witness: Witness) -> Self {
        ClassReport { kind: ClassKind::None, dim, witness: Some(witness) }
    }

    pub fn passed(&self) -> bool {
        self.kind != ClassKind::None
    }
}

fn compare(found: &TriMatrix, expected: &TriMatrix) -> Option<Witness> {
    found.first_difference(expected).map(|(row, col)| Witness {
        row,
        col,
        expected: expected.at(row, col),
        found: found.at(row, col),
    })
}

/// `M² = I`.
pub fn check_involution(m: &TriMatrix) -> ClassReport {
    let n = m.dim();
    let square = m.mul(m).expect("same dimension");
    match compare(&square, &TriMatrix::identity(n)) {
        None => ClassReport::pass(ClassKind::Involution, n),
        Some(w) => ClassReport::fail(n, w),
    }
}

/// `(M D̄)² = I`, cross-checked against `D̄ M D̄ = M⁻¹`.
pub fn check_pseudo_involution(m: &TriMatrix) -> Result<ClassReport> {
    let n = m.dim();
    let md = m.mul(&TriMatrix::alternating(n))?;
    let first = compare(&md.mul(&md)?, &TriMatrix::identity(n));
    let second_holds = match m.inverse() {
        Ok(inv) => m.sign_conjugate() == inv,
        Err(_) => false,
    };
    if first.is_none() != second_holds {
        return Err(Error::CheckDisagreement(format!(
            "(M D)^2 = I is {}, D M D = M^-1 is {}",
            first.is_none(),
            second_holds
        )));
    }
    Ok(match first {
        None => ClassReport::pass(ClassKind::PseudoInvolution, n),
        Some(w) => ClassReport::fail(n, w),
    })
}

/// Aerated, and `M⁻¹[i][j] = (-1)^((i-j)/2) M[i][j]`.
pub fn check_quasi_involution(m: &TriMatrix) -> Result<ClassReport> {
    let n = m.dim();
    if let Some(i) = (0..n).find(|&i| !m.at(i, i).is_one()) {
        return Err(Error::NonUnitDiagonal(i));
    }
    for i in 0..n {
        for j in 0..i {
            if (i - j) % 2 == 1 && !m.at(i, j).is_zero() {
                let w = Witness { row: i, col: j, expected: Rational::zero(), found: m.at(i, j) };
                return Ok(ClassReport::fail(n, w));
            }
        }
    }
    let signed = TriMatrix::from_fn(n, |i, j| if (i - j) % 4 == 2 { -m.at(i, j) } else { m.at(i, j) });
    Ok(match compare(&m.inverse()?, &signed) {
        None => ClassReport::pass(ClassKind::QuasiInvolution, n),
        Some(w) => ClassReport::fail(n, w),
    })
}

/// `A_r = ((1 + (r-1)x)/(1-x); 1/(1-x)², x/(1-x))`: Pascal's triangle with
/// column 0 replaced by `1, r, r, r, …`.
pub fn make_ar(r: &Rational, prec: usize) -> AlmostRiordan {
    let p = prec.max(2);
    let prefix = Series::new((0..p).map(|n| if n == 0 { Rational::one() } else { r.clone() }).collect()).unwrap();
    let g = Series::new((0..p).map(|n| Rational::from(n as i64 + 1)).collect()).unwrap();
    let f = Series::new((0..p).map(|n| if n == 0 { Rational::zero() } else { Rational::one() }).collect()).unwrap();
    AlmostRiordan::new(vec![prefix], g, f).expect("valid element")
}

/// `υ_f[ρ, σ, π] = ((f/x)^ρ (f')^σ ((f-1)/(x-1))^π, f)`.
pub fn make_upsilon(f: &Series, rho: i64, sigma: i64, pi: i64) -> Result<RiordanArray> {
    let p = f.prec();
    if p < 2 {
        return Err(Error::Precision { needed: 2, have: p });
    }
    let f_over_x = f.shift_div(1)?;
    let df = f.derivative()?;
    let x_minus_1 = Series::x(p).sub(&Series::one(p));
    let ratio = f.sub(&Series::one(p)).div(&x_minus_1)?;
    let g = f_over_x.pow_int(rho)?.mul(&df.pow_int(sigma)?)?.mul(&ratio.pow_int(pi)?)?;
    RiordanArray::new(g, f.clone())
}

/// `(xg/f; g, f)`, an involution of order 1 whenever `(g, f)` is one.
/// The check runs at `n`; a failure is returned with its witness.
pub fn adjoin_involution(r: &RiordanArray, n: usize) -> Result<AlmostRiordan> {
    let report = check_involution(&r.to_matrix(n)?);
    if let Some(witness) = report.witness {
        return Err(Error::NotInvolution { dim: n, witness });
    }
    let a = r.g().mul(&r.f().shift_div(1)?.mul_invert()?)?;
    AlmostRiordan::new(vec![a], r.g().clone(), r.f().clone())
}

/// `((x/f)^k g, f)`.
pub fn involution_iterate(r: &RiordanArray, k: u32) -> Result<RiordanArray> {
    let x_over_f = r.f().shift_div(1)?.mul_invert()?;
    let g = x_over_f.pow_int(k as i64)?.mul(r.g())?;
    RiordanArray::new(g, r.f().clone())
}

/// `(1; g, f)`.
pub fn embed_trivial(r: &RiordanArray) -> AlmostRiordan {
    AlmostRiordan::new(vec![Series::one(r.prec())], r.g().clone(), r.f().clone()).expect("valid element")
}
