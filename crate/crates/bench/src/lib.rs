//! Fixtures shared by the criterion benchmarks in `benches/`.

use riordan_core::gfexpr::parse_and_evaluate;
use riordan_core::{RiordanArray, Series};

pub const SCHRODER_G: &str = "(1-x^2-sqrt(1-6*x^2+x^4))/(2*x^2)";

pub fn series(text: &str, prec: usize) -> Series {
    parse_and_evaluate(text, prec).expect("fixture expression")
}

pub fn schroder(prec: usize) -> RiordanArray {
    RiordanArray::new(series(SCHRODER_G, prec), series(&format!("x*{SCHRODER_G}"), prec)).expect("fixture element")
}
