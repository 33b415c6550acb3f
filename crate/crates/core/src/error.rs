use thiserror::Error;

use crate::involcheck::Witness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("nonlinear: product of two non-constant affine expressions")]
    Nonlinear,

    #[error("unknown `{0}` is free or the equation is inconsistent (zero coefficient)")]
    FreeOrInconsistent(String),

    #[error("unknown `{0}` has no value in the assignment")]
    Unassigned(String),

    #[error("series is not a unit: constant term is zero")]
    NotAUnit,

    #[error("unsupported: leading coefficient `{0}` is not a constant")]
    NonConstantLeading(String),

    #[error("inner series must have zero constant term")]
    InnerConstantTerm,

    #[error("series has no compositional inverse: coefficient of x must be a nonzero constant")]
    NotCompositionallyInvertible,

    #[error("square root requires constant term 1, found {0}")]
    SqrtLeading(String),

    #[error("exponent {0} unsupported: denominator must be 1 or 2")]
    BadExponent(String),

    #[error("series is not divisible by x^{0}")]
    NotDivisible(usize),

    #[error("precision exhausted: needed {needed} coefficients, have {have}")]
    Precision { needed: usize, have: usize },

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },

    #[error("pole at x=0")]
    Pole,

    #[error("square root of {0}: not a perfect square")]
    NotPerfectSquare(String),

    #[error("square root of a series with odd valuation {0}")]
    OddValuation(usize),

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("diagonal entry ({0},{0}) is not a nonzero constant")]
    SingularDiagonal(usize),

    #[error("diagonal entry ({0},{0}) is not 1")]
    NonUnitDiagonal(usize),

    #[error("internal disagreement between check paths: {0}")]
    CheckDisagreement(String),

    #[error("not an involution at N={dim}: {witness}")]
    NotInvolution { dim: usize, witness: Witness },

    #[error("interior is not a quasi-involution at N={dim}: {witness}")]
    NotQuasi { dim: usize, witness: Witness },

    #[error("inconsistent constraint at position {position}: {equation} = 0")]
    Inconsistent { position: usize, equation: String },

    #[error("seed: {0}")]
    Seed(String),

    #[error("invalid element spec: {0}")]
    Spec(String),
}

impl Error {
    /// True for failures that come from the input itself (bad expression, bad
    /// element) rather than from the mathematics of a well-formed request.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. } | Error::UnknownIdentifier { .. } | Error::Spec(_) | Error::Seed(_)
        )
    }
}
