//! Acceptance run: one line per criterion.
//!
//! Criteria whose literal statement rests on a misprinted display, formula or
//! seed print FAIL with the reason, and the corrected claim is asserted in its
//! place. The run succeeds when the failing set is exactly `KNOWN_RED`.

use std::collections::BTreeMap;
use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use riordan_core::gfexpr::parse_and_evaluate;
use riordan_core::involcheck::{
    adjoin_involution, check_involution, check_pseudo_involution, check_quasi_involution, involution_iterate,
    make_ar, make_upsilon,
};
use riordan_core::quasisynth::{interior_of, synth_column, unknown_name, verify_synth};
use riordan_core::{AlmostRiordan, LinExpr, Rational, RiordanArray, Scalar, Series, TriMatrix};

const KNOWN_RED: [u32; 3] = [4, 6, 8];

struct Outcome {
    pass: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { pass: true, detail: detail.into() }
}

fn red(detail: impl Into<String>) -> Outcome {
    Outcome { pass: false, detail: detail.into() }
}

fn ser(text: &str, p: usize) -> Series {
    parse_and_evaluate(text, p).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn riordan(g: &str, f: &str, p: usize) -> RiordanArray {
    RiordanArray::new(ser(g, p), ser(f, p)).unwrap()
}

fn almost(prefix: &[&str], g: &str, f: &str, p: usize) -> AlmostRiordan {
    AlmostRiordan::new(prefix.iter().map(|a| ser(a, p)).collect(), ser(g, p), ser(f, p)).unwrap()
}

/// Rows separated by `;`, entries by whitespace. An entry is an integer or a
/// variable name from `vars`, optionally negated.
fn display(text: &str, vars: &[(&str, i64)]) -> TriMatrix {
    let rows = text
        .split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|tok| {
                    let (neg, name) = match tok.strip_prefix('-') {
                        Some(rest) => (true, rest),
                        None => (false, tok),
                    };
                    let v = match vars.iter().find(|(n, _)| *n == name) {
                        Some((_, v)) => *v,
                        None => name.parse::<i64>().unwrap_or_else(|_| panic!("bad entry {tok}")),
                    };
                    Rational::from(if neg { -v } else { v })
                })
                .collect()
        })
        .collect();
    TriMatrix::from_rows(rows).unwrap()
}

fn ints(s: &Series) -> Vec<i64> {
    s.coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
}

fn assert_pseudo(m: &TriMatrix) {
    let report = check_pseudo_involution(m).unwrap();
    assert!(report.passed(), "pseudo-involution at N={}: {:?}", m.dim(), report.witness);
}

fn assert_quasi(m: &TriMatrix) {
    let report = check_quasi_involution(m).unwrap();
    assert!(report.passed(), "quasi-involution at N={}: {:?}", m.dim(), report.witness);
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_1() -> Outcome {
    let m = riordan("1/(1-x)", "x/(1-x)", 7).to_matrix(7).unwrap();
    let expected = TriMatrix::from_fn(7, |n, k| Rational::from(binomial(n as i64, k as i64)));
    assert_eq!(m, expected);
    let nonzero: Vec<(usize, usize)> =
        (0..7).flat_map(|i| (0..=i).map(move |j| (i, j))).filter(|&(i, j)| !m.at(i, j).is_zero()).collect();
    let below = nonzero.iter().filter(|(i, j)| i > j).count();
    assert_eq!(nonzero.len(), 28);
    assert_eq!(below, 21);
    pass("C(n,k) for n<7; 28 nonzero entries, 21 of them below the diagonal")
}

const A_R_DISPLAY: &str = "1 0 0 0 0 0 0; r 1 0 0 0 0 0; r 2 1 0 0 0 0; r 3 3 1 0 0 0;
    r 4 6 4 1 0 0; r 5 10 10 5 1 0; r 6 15 20 15 6 1";
const A_R_INV_DISPLAY: &str = "1 0 0 0 0 0 0; -r 1 0 0 0 0 0; r -2 1 0 0 0 0; -r 3 -3 1 0 0 0;
    r -4 6 -4 1 0 0; -r 5 -10 10 -5 1 0; r -6 15 -20 15 -6 1";

fn criterion_2() -> Outcome {
    let a5 = almost(&["(1+x*(5-1))/(1-x)"], "1/(1-x)^2", "x/(1-x)", 32);
    assert_eq!(a5, make_ar(&Rational::from(5), 32));
    let m = a5.to_matrix(7).unwrap();
    assert_eq!(m, display(A_R_DISPLAY, &[("r", 5)]));
    assert_eq!(m.inverse().unwrap(), display(A_R_INV_DISPLAY, &[("r", 5)]));
    let inv = a5.inverse().unwrap();
    assert_eq!(inv.to_matrix(7).unwrap(), display(A_R_INV_DISPLAY, &[("r", 5)]));
    assert_eq!(inv.prefix()[0], ser("1-5*x/(1+x)", 32));
    for r in [-3, 0, 2, 5, 7] {
        assert_pseudo(&make_ar(&Rational::from(r), 12).to_matrix(12).unwrap());
    }
    pass("A_5 and inverse match; a* = 1-5x/(1+x) to 32 terms; pseudo at N=12 for r in {-3,0,2,5,7}")
}

fn criterion_3() -> Outcome {
    let a2 = make_ar(&Rational::from(2), 16);
    let cube = a2.mul(&a2).unwrap().mul(&a2).unwrap();
    let col = ints(&cube.prefix()[0]);
    assert_eq!(&col[..6], &[1, 6, 18, 54, 162, 486]);
    assert_eq!(cube, a2.pow(3).unwrap());
    assert_pseudo(&cube.to_matrix(12).unwrap());
    assert_eq!(cube.prefix()[0], ser("(1+3*(2-1)*x)/(1-3*x)", 16));
    let printed = ser("(1+3*2*(x-1))/(1-3*x)", 16);
    assert_ne!(cube.prefix()[0], printed);
    assert_eq!(*cube.g(), ser("1/(1-3*x)^2", 16));
    assert_eq!(*cube.f(), ser("x/(1-3*x)", 16));
    pass("A_2^3 column 1,6,18,54,...; pseudo at N=12; numerator is 1+p(r-1)x, not the printed 1+pr(x-1)")
}

fn criterion_4() -> Outcome {
    let p = 12;
    let a = make_ar(&Rational::from(2), p);
    let b = make_ar(&Rational::from(3), p).pow(2).unwrap();
    let ab = a.mul(&b).unwrap();
    let ba = b.mul(&a).unwrap();
    assert_ne!(ab.to_matrix(10).unwrap(), ba.to_matrix(10).unwrap());

    let (r, pp, s, q) = (2, 1, 3, 2);
    let printed = ser(&format!("1+{pp}*{r}*x/(1-{pp}*x)+{s}*x*(1/(1-({pp}+{q})*x)-1/(1-{pp}*x))"), p);
    let corrected = ser(&format!("1+{pp}*{r}*x/(1-{pp}*x)+{s}*(1/(1-({pp}+{q})*x)-1/(1-{pp}*x))"), p);
    assert_eq!(ab.prefix()[0], corrected);
    assert_eq!(&ints(&corrected)[..6], &[1, 8, 26, 80, 242, 728]);
    assert_eq!(*ab.g(), ser("1/(1-3*x)^2", p));
    assert_eq!(*ab.f(), ser("x/(1-3*x)", p));
    if ab.prefix()[0] == printed {
        return pass("A_2 A_3^2 != A_3^2 A_2 and the printed product formula holds");
    }
    let at = (0..p).find(|&n| ab.prefix()[0].coeffs()[n] != printed.coeffs()[n]).unwrap();
    red(format!(
        "A_2 A_3^2 != A_3^2 A_2 at N=10, but the printed product prefix differs at x^{at} \
         ({} vs {}); it holds without the factor x on the s term",
        printed.coeffs()[at],
        ab.prefix()[0].coeffs()[at]
    ))
}

const ORDER2: &str = "1 0 0 0 0 0 0; 2 1 0 0 0 0 0; 2 2 1 0 0 0 0; 2 2 2 1 0 0 0;
    2 2 3 3 1 0 0; 2 2 4 6 4 1 0; 2 2 5 10 10 5 1";
const ORDER2_INV: &str = "1 0 0 0 0 0 0; -2 1 0 0 0 0 0; 2 -2 1 0 0 0 0; -2 2 -2 1 0 0 0;
    2 -2 3 -3 1 0 0; -2 2 -4 6 -4 1 0; 2 -2 5 -10 10 -5 1";
const ORDER3: &str = "1 0 0 0 0 0 0 0; 2 1 0 0 0 0 0 0; 2 2 1 0 0 0 0 0; 2 2 2 1 0 0 0 0;
    2 2 2 2 1 0 0 0; 2 2 2 3 3 1 0 0; 2 2 2 4 6 4 1 0; 2 2 2 5 10 10 5 1";
const ORDER3_INV: &str = "1 0 0 0 0 0 0 0; -2 1 0 0 0 0 0 0; 2 -2 1 0 0 0 0 0; -2 2 -2 1 0 0 0 0;
    2 -2 2 -2 1 0 0 0; -2 2 -2 3 -3 1 0 0; 2 -2 2 -4 6 -4 1 0; -2 2 -2 5 -10 10 -5 1";

fn criterion_5() -> Outcome {
    let a = "(1+x)/(1-x)";
    let two = almost(&[a, a], "1/(1-x)^2", "x/(1-x)", 32);
    assert_eq!(two.to_matrix(7).unwrap(), display(ORDER2, &[]));
    let inv = two.inverse().unwrap();
    assert_eq!(inv.to_matrix(7).unwrap(), display(ORDER2_INV, &[]));
    assert_eq!(two.to_matrix(7).unwrap().inverse().unwrap(), display(ORDER2_INV, &[]));
    let expected = ser("(1-x)/(1+x)", 32);
    assert_eq!(inv.prefix()[1], expected);
    assert_eq!(inv.prefix()[0], expected);
    assert_pseudo(&two.to_matrix(12).unwrap());

    let three = almost(&[a, a, a], "1/(1-x)^2", "x/(1-x)", 16);
    let m = three.to_matrix(8).unwrap();
    assert_eq!(m, display(ORDER3, &[]));
    assert_eq!(three.inverse().unwrap().to_matrix(8).unwrap(), display(ORDER3_INV, &[]));
    let md = m.mul(&TriMatrix::alternating(8)).unwrap();
    assert!(md.mul(&md).unwrap().is_identity());
    pass("order 2 and order 3 displays and inverses match; b* = a** = (1-x)/(1+x) to 32 terms; pseudo checks pass")
}

const UPSILON: &str = "1 0 0 0 0 0 0 0; -1 -1 0 0 0 0 0 0; 1 2 1 0 0 0 0 0; 1 -3 -3 -1 0 0 0 0;
    -4 2 6 4 1 0 0 0; 10 2 -8 -10 -5 -1 0 0; -18 -12 6 18 15 6 1 0; 30 30 6 -24 -33 -21 -7 -1";
const ADJOINED: &str = "1 0 0 0 0 0 0 0; 0 1 0 0 0 0 0 0; 0 -1 -1 0 0 0 0 0; 2 1 2 1 0 0 0 0;
    -3 1 -3 -3 -1 0 0 0; 6 -4 2 6 4 1 0 0; -8 10 2 -8 -10 -5 -1 0; 12 -18 -12 6 18 15 6 1";

fn criterion_6() -> Outcome {
    let f = ser("-x/(1+x)", 16);
    let ups = make_upsilon(&f, 1, 1, 1).unwrap();
    assert_eq!(*ups.g(), ser("(1+2*x)/((1+x)^4*(1-x))", ups.prec()));
    assert_eq!(ups.to_matrix(8).unwrap(), display(UPSILON, &[]));
    assert!(check_involution(&ups.to_matrix(12).unwrap()).passed());

    let adj = adjoin_involution(&ups, 12).unwrap();
    let computed = adj.to_matrix(8).unwrap();
    assert!(computed.mul(&computed).unwrap().is_identity());
    assert!(check_involution(&adj.to_matrix(12).unwrap()).passed());
    let printed = display(ADJOINED, &[]);
    for j in 1..8 {
        assert_eq!(computed.column(j), printed.column(j), "column {j}");
    }
    let negated: Vec<Rational> = printed.column(0).iter().map(|v| -v).collect();
    assert_eq!(computed.column(0), negated);
    let literal = check_involution(&printed);

    let iterate = involution_iterate(&ups, 2).unwrap();
    assert!(check_involution(&iterate.to_matrix(10).unwrap()).passed());

    if literal.passed() && printed == computed {
        return pass("upsilon, adjoined array and iterate are involutions");
    }
    red(format!(
        "upsilon display matches and squares to I at N=12; iterate k=2 is an involution at N=10; \
         the printed adjoined display has column 0 negated (a0 = -1 for a = xg/f) and its square \
         fails at {}; the computed array squares to I",
        literal.witness.map(|w| w.to_string()).unwrap_or_default()
    ))
}

const SCHRODER_G: &str = "(1-x^2-sqrt(1-6*x^2+x^4))/(2*x^2)";
const SCHRODER: &str = "1 0 0 0 0 0 0 0 0; 0 1 0 0 0 0 0 0 0; 2 0 1 0 0 0 0 0 0; 0 4 0 1 0 0 0 0 0;
    6 0 6 0 1 0 0 0 0; 0 16 0 8 0 1 0 0 0; 22 0 30 0 10 0 1 0 0; 0 68 0 48 0 12 0 1 0;
    90 0 146 0 70 0 14 0 1";
const SCHRODER_INV: &str = "1 0 0 0 0 0 0 0 0; 0 1 0 0 0 0 0 0 0; -2 0 1 0 0 0 0 0 0; 0 -4 0 1 0 0 0 0 0;
    6 0 -6 0 1 0 0 0 0; 0 16 0 -8 0 1 0 0 0; -22 0 30 0 -10 0 1 0 0; 0 -68 0 48 0 -12 0 1 0;
    90 0 -146 0 70 0 -14 0 1";
const SCHRODER_INTERIOR: &str = "1 0 0 0 0 0 0 0; 0 1 0 0 0 0 0 0; 4 0 1 0 0 0 0 0; 0 6 0 1 0 0 0 0;
    16 0 8 0 1 0 0 0; 0 30 0 10 0 1 0 0; 68 0 48 0 12 0 1 0; 0 146 0 70 0 14 0 1";
const Q: &str = "1 0 0 0 0 0 0; 0 1 0 0 0 0 0; 6 0 1 0 0 0 0; 0 8 0 1 0 0 0; 30 0 10 0 1 0 0;
    0 48 0 12 0 1 0; 140 0 70 0 14 0 1";
const Q_INV: &str = "1 0 0 0 0 0 0; 0 1 0 0 0 0 0; -6 0 1 0 0 0 0; 0 -8 0 1 0 0 0; 30 0 -10 0 1 0 0;
    0 48 0 -12 0 1 0; -140 0 70 0 -14 0 1";
const Q_VARIANT: &str = "1 0 0 0 0 0 0 0; 0 1 0 0 0 0 0 0; 4 0 1 0 0 0 0 0; 0 6 0 1 0 0 0 0;
    16 0 8 0 1 0 0 0; 0 30 0 10 0 1 0 0; 64 0 48 0 12 0 1 0; 0 140 0 70 0 14 0 1";

fn schroder(p: usize) -> RiordanArray {
    riordan(SCHRODER_G, &format!("x*{SCHRODER_G}"), p)
}

fn q_array(p: usize) -> RiordanArray {
    riordan("(1-4*x^2)^(-3/2)", "x/sqrt(1-4*x^2)", p)
}

fn criterion_7() -> Outcome {
    let s = schroder(20).to_matrix(9).unwrap();
    assert_eq!(s, display(SCHRODER, &[]));
    assert_eq!(s.inverse().unwrap(), display(SCHRODER_INV, &[]));
    assert_eq!(schroder(20).inverse().unwrap().to_matrix(9).unwrap(), display(SCHRODER_INV, &[]));
    let interior = riordan(&format!("({SCHRODER_G})^2"), &format!("x*{SCHRODER_G}"), 20);
    assert!(interior.agrees_with(&interior_of(&schroder(20)).unwrap()));
    let im = interior.to_matrix(8).unwrap();
    assert_eq!(im, display(SCHRODER_INTERIOR, &[]));

    let q = q_array(16).to_matrix(7).unwrap();
    assert_eq!(q, display(Q, &[]));
    assert_eq!(q.inverse().unwrap(), display(Q_INV, &[]));
    let v = riordan("1/(1-4*x^2)", "x/sqrt(1-4*x^2)", 16).to_matrix(8).unwrap();
    assert_eq!(v, display(Q_VARIANT, &[]));
    let variant = riordan("1/(1-4*x^2)", "x/sqrt(1-4*x^2)", 16);
    assert!(interior_of(&variant).unwrap().agrees_with(&q_array(16)));

    for m in [&s, &im, &q, &v] {
        assert_quasi(m);
    }
    assert_quasi(&schroder(20).to_matrix(16).unwrap());
    assert_quasi(&q_array(20).to_matrix(16).unwrap());
    pass("Schroeder 9x9 and inverse, interior 8x8, Q 7x7 and inverse, (1-4x^2)^-1 variant 8x8 match; all quasi")
}

fn seed_map(values: &[(usize, i64)]) -> BTreeMap<String, Rational> {
    values.iter().map(|&(k, v)| (unknown_name(k), Rational::from(v))).collect()
}

fn lin(terms: &[(&str, i64)]) -> LinExpr {
    LinExpr::from_parts(Rational::zero(), terms.iter().map(|&(n, c)| (n.to_string(), Rational::from(c))))
}

/// The almost-Riordan matrix with the given initial column over an interior,
/// inverted directly; returns the entries that break the sign pattern.
fn inversion_oracle(column: &Series<LinExpr>, interior: &RiordanArray, n: usize) -> Vec<(usize, usize)> {
    let inner = interior.to_matrix(n - 1).unwrap();
    let m = TriMatrix::<LinExpr>::from_fn(n, |i, j| match (i, j) {
        (i, 0) => column.coeffs()[i].clone(),
        (0, _) => LinExpr::zero(),
        (i, j) => LinExpr::from(inner.at(i - 1, j - 1)),
    });
    let inv = m.inverse().unwrap();
    let mut bad = Vec::new();
    for i in 0..n {
        for j in 0..=i {
            let entry = m.at(i, j);
            let expected = if (i - j) % 4 == 2 { entry.neg() } else { entry };
            if inv.at(i, j) != expected {
                bad.push((i, j));
            }
        }
    }
    bad
}

fn criterion_8() -> Outcome {
    let n = 16;
    let interior = interior_of(&schroder(24)).unwrap();
    let result = synth_column(&interior, n, None).unwrap();
    assert_eq!(result.free_positions(), vec![2, 6, 10, 14]);

    assert!(inversion_oracle(&result.column, &interior, n).is_empty());

    // Printed: beta = 3 gamma, delta = -32 alpha + 7 gamma, zeta = 1200 alpha - 224 gamma + 11 epsilon.
    assert_eq!(result.relations[&4], lin(&[("u2", 3)]));
    assert_ne!(result.relations[&4], lin(&[("u6", 3)]));
    assert_eq!(result.relations[&8], lin(&[("u2", -32), ("u6", 7)]));
    assert_eq!(result.relations[&12], lin(&[("u2", 1200), ("u6", -224), ("u10", 11)]));

    let aerated = ints(&schroder(15).g().truncate(15));
    assert_eq!(aerated, vec![1, 0, 2, 0, 6, 0, 22, 0, 90, 0, 394, 0, 1806, 0, 8558]);

    let good = seed_map(&[(2, 2), (6, 22), (10, 394), (14, 8558)]);
    let col = ints(&result.concrete_column(&good).unwrap());
    assert_eq!(&col[..15], &aerated[..]);
    assert!(verify_synth(&interior, &result, &good, n).unwrap().passed());

    let literal = seed_map(&[(2, 2), (6, 22), (10, 394), (14, 1806)]);
    let lit = ints(&result.concrete_column(&literal).unwrap());
    let agree = (0..15).take_while(|&k| lit[k] == aerated[k]).count();
    assert!(verify_synth(&interior, &result, &literal, n).unwrap().passed());
    if agree == 15 {
        return pass("free {2,6,10,14}; seed reproduces the column through position 14");
    }
    red(format!(
        "free {{2,6,10,14}}; relations match the inversion oracle; printed beta = 3 gamma is 3 alpha; \
         seed (2,22,394,1806) agrees only through position {} (1806 sits at 12, position 14 is 8558); \
         seed (2,22,394,8558) reproduces the column",
        agree - 1
    ))
}

fn criterion_9() -> Outcome {
    let q = q_array(24);
    let interior = q;
    let n = 18;
    let all_ones: BTreeMap<String, Rational> = [2, 6, 10, 14].iter().map(|&k| (unknown_name(k), Rational::one())).collect();
    let result = synth_column(&interior, n, Some(&all_ones)).unwrap();
    let col = ints(result.concrete.as_ref().unwrap());
    assert_eq!(&col[..17], &[1, 0, 1, 0, 4, 0, 1, 0, -56, 0, 1, 0, 2764, 0, 1, 0, -250736]);
    assert!(verify_synth(&interior, &result, &all_ones, n).unwrap().passed());
    assert_eq!(result.relations[&4], lin(&[("u2", 4)]));
    assert_eq!(result.relations[&8], lin(&[("u2", -64), ("u6", 8)]));

    let n = 16;
    let result = synth_column(&interior, n, None).unwrap();
    let mut runner = TestRunner::new(quiet(20));
    runner
        .run(&proptest::collection::vec(-50i64..=50, 4), |vals| {
            let seed: BTreeMap<String, Rational> =
                result.free_names.iter().zip(&vals).map(|(k, &v)| (k.clone(), Rational::from(v))).collect();
            prop_assert!(verify_synth(&interior, &result, &seed, n).unwrap().passed());
            Ok(())
        })
        .unwrap();
    pass("all-ones seed gives 1,0,1,0,4,...,-250736 through 16 and verifies at N=18; 20 random seeds verify at N=16")
}

const N: usize = 10;

fn quiet(cases: u32) -> Config {
    Config { cases, failure_persistence: None, ..Config::default() }
}

fn arb_coeffs(lead: BoxedStrategy<i64>, len: usize) -> impl Strategy<Value = Vec<i64>> {
    (lead, proptest::collection::vec(-4i64..=4, len - 1)).prop_map(|(c0, rest)| {
        let mut v = vec![c0];
        v.extend(rest);
        v
    })
}

fn arb_f(len: usize) -> impl Strategy<Value = Series> {
    (prop_oneof![Just(1i64), Just(-1), Just(2)], proptest::collection::vec(-3i64..=3, len - 2)).prop_map(
        |(f1, rest)| {
            let mut f = vec![0, f1];
            f.extend(rest);
            Series::from_ints(&f)
        },
    )
}

fn arb_riordan() -> impl Strategy<Value = RiordanArray> {
    (arb_coeffs(prop_oneof![Just(1i64), Just(-1), Just(3)].boxed(), N), arb_f(N))
        .prop_map(|(g, f)| RiordanArray::new(Series::from_ints(&g), f).unwrap())
}

fn arb_almost(order: usize) -> impl Strategy<Value = AlmostRiordan> {
    (
        proptest::collection::vec(arb_coeffs(prop_oneof![Just(1i64), Just(-1), Just(2)].boxed(), N), order),
        arb_riordan(),
    )
        .prop_map(|(prefix, r)| {
            AlmostRiordan::new(prefix.iter().map(|a| Series::from_ints(a)).collect(), r.g().clone(), r.f().clone())
                .unwrap()
        })
}

fn arb_vector() -> impl Strategy<Value = Series> {
    proptest::collection::vec(-5i64..=5, N).prop_map(|v| Series::from_ints(&v))
}

fn group_checks_riordan(a: &RiordanArray, b: &RiordanArray, h: &Series) -> std::result::Result<(), TestCaseError> {
    let (ma, mb) = (a.to_matrix(N).unwrap(), b.to_matrix(N).unwrap());
    prop_assert_eq!(a.mul(b).unwrap().to_matrix(N).unwrap(), ma.mul(&mb).unwrap());
    let inv = a.inverse().unwrap();
    prop_assert!(a.mul(&inv).unwrap().to_matrix(N).unwrap().is_identity());
    prop_assert!(inv.mul(a).unwrap().to_matrix(N).unwrap().is_identity());
    prop_assert_eq!(inv.to_matrix(N).unwrap(), ma.inverse().unwrap());
    let applied = a.apply(h).unwrap();
    prop_assert_eq!(applied.coeffs(), &ma.mul_vec(h.coeffs()).unwrap()[..]);
    Ok(())
}

fn group_checks_almost(a: &AlmostRiordan, b: &AlmostRiordan, h: &Series) -> std::result::Result<(), TestCaseError> {
    let (ma, mb) = (a.to_matrix(N).unwrap(), b.to_matrix(N).unwrap());
    prop_assert_eq!(a.mul(b).unwrap().to_matrix(N).unwrap(), ma.mul(&mb).unwrap());
    let inv = a.inverse().unwrap();
    prop_assert!(a.mul(&inv).unwrap().to_matrix(N).unwrap().is_identity());
    prop_assert!(inv.mul(a).unwrap().to_matrix(N).unwrap().is_identity());
    prop_assert_eq!(inv.to_matrix(N).unwrap(), ma.inverse().unwrap());
    let applied = a.apply(h).unwrap();
    prop_assert_eq!(applied.coeffs(), &ma.mul_vec(h.coeffs()).unwrap()[..]);
    if a.order() == 1 {
        let left = AlmostRiordan::new(vec![a.prefix()[0].clone()], Series::one(N), Series::x(N)).unwrap();
        let right = AlmostRiordan::new(vec![Series::one(N)], a.g().clone(), a.f().clone()).unwrap();
        prop_assert_eq!(left.mul(&right).unwrap(), a.clone());
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let cases = |n| TestRunner::new(quiet(n));

    cases(100)
        .run(&(arb_riordan(), arb_riordan(), arb_vector()), |(a, b, h)| group_checks_riordan(&a, &b, &h))
        .unwrap();
    cases(100)
        .run(&(arb_almost(1), arb_almost(1), arb_vector()), |(a, b, h)| group_checks_almost(&a, &b, &h))
        .unwrap();
    cases(100)
        .run(&(arb_almost(2), arb_almost(2), arb_vector()), |(a, b, h)| group_checks_almost(&a, &b, &h))
        .unwrap();

    let p = 16;
    let series = (arb_f(p), arb_coeffs(Just(1i64).boxed(), p), arb_coeffs(prop_oneof![Just(1i64), Just(-2), Just(3)].boxed(), p));
    cases(200)
        .run(&series, |(f, s, u)| {
            let fbar = f.comp_inverse().unwrap();
            prop_assert_eq!(f.compose(&fbar).unwrap(), Series::x(p));
            prop_assert_eq!(fbar.compose(&f).unwrap(), Series::x(p));
            let s = Series::from_ints(&s);
            let root = s.sqrt().unwrap();
            prop_assert_eq!(root.mul(&root).unwrap(), s);
            let u = Series::from_ints(&u);
            prop_assert_eq!(u.mul(&u.mul_invert().unwrap()).unwrap(), Series::one(p));
            Ok(())
        })
        .unwrap();
    pass("100 Riordan, 100 order-1, 100 order-2 elements at N=10; 200 series at prec 16")
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let start = Instant::now();
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (id, run) in criteria {
        let t = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Outcome { pass: false, detail: format!("unexpected failure: {msg}") }
            });
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        writeln!(out, "criterion {id:>2}: {verdict} {} [{:.1?}]", outcome.detail, t.elapsed()).unwrap();
        if !outcome.pass {
            failed.push(id);
        }
    }
    writeln!(out, "acceptance: {} of 10 pass in {:.1?}", 10 - failed.len(), start.elapsed()).unwrap();
    if failed != KNOWN_RED {
        writeln!(out, "acceptance: failing set {failed:?} differs from the known set {KNOWN_RED:?}").unwrap();
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
