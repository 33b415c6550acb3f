//! Exact arithmetic for Riordan arrays and almost-Riordan arrays.
//!
//! The layers, bottom-up:
//!
//! * [`scalars`]: exact rationals and affine expressions over named unknowns.
//! * [`series`]: truncated formal power series with explicit precision.
//! * [`gfexpr`]: a small parser for generating-function expressions in `x`.
//! * [`trimat`]: lower-triangular matrices, the independent oracle.
//! * [`riordan`] and [`almost`]: the group elements and their operations.
//! * [`involcheck`]: involution, pseudo-involution and quasi-involution tests.
//! * [`quasisynth`]: synthesis of quasi-involution initial columns.
//! * [`element`]: element specs as used by the command-line tool.

pub mod almost;
pub mod element;
pub mod error;
pub mod gfexpr;
pub mod involcheck;
pub mod quasisynth;
pub mod riordan;
pub mod scalars;
pub mod series;
pub mod trimat;

pub use almost::AlmostRiordan;
pub use error::{Error, Result};
pub use involcheck::{ClassKind, ClassReport, Witness};
pub use quasisynth::SynthResult;
pub use riordan::RiordanArray;
pub use scalars::{LinExpr, Rational, Scalar};
pub use series::Series;
pub use trimat::TriMatrix;
