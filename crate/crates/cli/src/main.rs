//! `riordan`: exact Riordan and almost-Riordan array arithmetic from the
//! command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 mathematical or
//! precondition error, 3 a checked property does not hold, 4 the synthesis
//! constraints are inconsistent.

mod render;

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use riordan_core::element::{parse_param, Element, ElementSpec};
use riordan_core::gfexpr::parse_and_evaluate;
use riordan_core::involcheck::{check_involution, check_pseudo_involution, check_quasi_involution};
use riordan_core::quasisynth::{interior_of, solve_column, synth_column, verify_synth};
use riordan_core::{ClassKind, ClassReport, Error, Rational, Witness};

use render::Format;

/// Extra coefficients carried through operations so that printed results
/// are certified to the requested truncation.
const GUARD: usize = 8;

#[derive(Parser)]
#[command(name = "riordan", version, about = "Exact Riordan and almost-Riordan array arithmetic")]
struct Cli {
    /// Matrix dimension and number of printed coefficients.
    #[arg(long, global = true, env = "RIORDAN_TRUNC", default_value_t = 16)]
    trunc: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the matrix of an element.
    Show(ElementArgs),
    /// Multiply elements left to right.
    Mul {
        #[command(flatten)]
        element: ElementArgs,
        /// Also print the matrix of the result.
        #[arg(long)]
        matrix: bool,
    },
    /// Invert an element.
    Inv {
        #[command(flatten)]
        element: ElementArgs,
        #[arg(long)]
        matrix: bool,
    },
    /// Raise an element to an integer power.
    Pow {
        #[command(flatten)]
        element: ElementArgs,
        #[arg(short, long, allow_negative_numbers = true)]
        p: i64,
        #[arg(long)]
        matrix: bool,
    },
    /// Apply an element to a series (the fundamental theorem).
    Apply {
        #[command(flatten)]
        element: ElementArgs,
        /// Series to act on, as an expression in x.
        #[arg(long)]
        series: String,
    },
    /// Test involution properties of the N x N matrix.
    Check {
        #[command(flatten)]
        element: ElementArgs,
        #[arg(long, value_enum, default_value_t = Kind::All)]
        kind: Kind,
    },
    /// Synthesize the initial column of an almost-Riordan quasi-involution.
    Synth {
        #[command(flatten)]
        element: ElementArgs,
        /// Interior as a JSON spec or "g; f".
        #[arg(long)]
        interior: Option<String>,
        /// Treat the element as a quasi-involution and use its interior (g f/x, f).
        #[arg(long)]
        outer: bool,
        /// Values for the free unknowns, e.g. u2=2,u6=22.
        #[arg(long, value_delimiter = ',')]
        seed: Vec<String>,
        #[arg(long, value_enum, default_value_t = Report::Both)]
        report: Report,
        /// Skip the quasi-involution check on the interior.
        #[arg(long)]
        skip_precheck: bool,
    },
}

#[derive(Args, Default)]
struct ElementArgs {
    /// First generating function g.
    #[arg(long)]
    g: Option<String>,
    /// Second generating function f.
    #[arg(long)]
    f: Option<String>,
    /// Build an almost-Riordan array from --prefix, --g and --f.
    #[arg(long)]
    almost: bool,
    /// Prefix series, in column order; repeat for higher orders.
    #[arg(long)]
    prefix: Vec<String>,
    /// Named rational parameter substituted into expressions, e.g. r=5.
    #[arg(long)]
    param: Vec<String>,
    /// Element as JSON, or @path to a JSON file. Repeatable.
    #[arg(long)]
    spec: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    All,
    Involution,
    Pseudo,
    Quasi,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Report {
    Relations,
    Column,
    Both,
}

enum Failure {
    Usage(String),
    Math(Error),
    Property,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(e)
    }
}

type Outcome = Result<(), Failure>;

// A closed pipe (`riordan … | head`) is not an error worth a panic.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Math(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Inconsistent { .. } => 4,
                e if e.is_input_error() => 1,
                _ => 2,
            })
        }
        Err(Failure::Property) => ExitCode::from(3),
    }
}

fn run(cli: &Cli) -> Outcome {
    let n = cli.trunc;
    if n < 2 {
        return Err(Failure::Usage("--trunc must be at least 2".into()));
    }
    let prec = n + GUARD;
    match &cli.command {
        Command::Show(args) => {
            let e = single(args, prec)?;
            emit(&render::matrix_output(&e, &e.to_matrix(n)?, cli.format));
        }
        Command::Mul { element, matrix } => {
            let elements = build_all(element, prec)?;
            if elements.len() < 2 {
                return Err(Failure::Usage("mul needs at least two elements".into()));
            }
            let mut acc = elements[0].clone();
            for e in &elements[1..] {
                acc = acc.mul(e)?;
            }
            print_element(&acc, n, *matrix, cli.format)?;
        }
        Command::Inv { element, matrix } => {
            print_element(&single(element, prec)?.inverse()?, n, *matrix, cli.format)?;
        }
        Command::Pow { element, p, matrix } => {
            print_element(&single(element, prec)?.pow(*p)?, n, *matrix, cli.format)?;
        }
        Command::Apply { element, series } => {
            let e = single(element, prec)?;
            let text = riordan_core::element::substitute_params(series, &params(element)?);
            let h = parse_and_evaluate(&text, prec)?;
            let out = e.apply(&h)?;
            if out.prec() < n {
                return Err(Error::Precision { needed: n, have: out.prec() }.into());
            }
            emit(&render::series_output(&out.truncate(n), cli.format));
        }
        Command::Check { element, kind } => {
            let m = single(element, prec)?.to_matrix(n)?;
            let mut results = Vec::new();
            if matches!(kind, Kind::All | Kind::Involution) {
                results.push((ClassKind::Involution, check_involution(&m)));
            }
            if matches!(kind, Kind::All | Kind::Pseudo) {
                results.push((ClassKind::PseudoInvolution, check_pseudo_involution(&m)?));
            }
            if matches!(kind, Kind::All | Kind::Quasi) {
                let report = match check_quasi_involution(&m) {
                    Err(Error::NonUnitDiagonal(i)) => ClassReport {
                        kind: ClassKind::None,
                        dim: n,
                        witness: Some(Witness { row: i, col: i, expected: Rational::one(), found: m.at(i, i) }),
                    },
                    other => other?,
                };
                results.push((ClassKind::QuasiInvolution, report));
            }
            emit(&render::check_output(n, &results, cli.format));
            if results.iter().any(|(_, r)| !r.passed()) {
                return Err(Failure::Property);
            }
        }
        Command::Synth { element, interior, outer, seed, report, skip_precheck } => {
            let base = match interior {
                Some(text) => interior_spec(text)?.build(&params(element)?, prec)?,
                None => single(element, prec)?,
            };
            let Element::Riordan(base) = base else {
                return Err(Failure::Usage("synth needs a Riordan array (not an almost-Riordan array)".into()));
            };
            let inner = if *outer { interior_of(&base)? } else { base };
            let seed = if seed.is_empty() {
                None
            } else {
                Some(seed.iter().map(|s| parse_param(s)).collect::<Result<BTreeMap<String, Rational>, _>>()?)
            };
            let result = if *skip_precheck {
                solve_column(&inner, n, seed.as_ref())?
            } else {
                synth_column(&inner, n, seed.as_ref())?
            };
            let verdict = match &seed {
                Some(s) => Some(verify_synth(&inner, &result, s, n)?),
                None => None,
            };
            let show_relations = *report != Report::Column;
            let show_column = *report != Report::Relations;
            emit(&render::synth_output(&result, verdict.as_ref(), show_relations, show_column, cli.format));
            if verdict.is_some_and(|v| !v.passed()) {
                return Err(Failure::Property);
            }
        }
    }
    Ok(())
}

fn params(args: &ElementArgs) -> Result<BTreeMap<String, Rational>, Failure> {
    Ok(args.param.iter().map(|p| parse_param(p)).collect::<Result<_, _>>()?)
}

fn read_spec(text: &str) -> Result<ElementSpec, Failure> {
    let body = match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?,
        None => text.to_string(),
    };
    // Output of `--format json` is accepted as well: the spec sits under "element".
    if let Ok(serde_json::Value::Object(map)) = serde_json::from_str::<serde_json::Value>(&body) {
        if let Some(inner) = map.get("element") {
            return Ok(ElementSpec::from_json(&inner.to_string())?);
        }
    }
    Ok(ElementSpec::from_json(&body)?)
}

fn interior_spec(text: &str) -> Result<ElementSpec, Failure> {
    if text.trim_start().starts_with('{') || text.starts_with('@') {
        return read_spec(text);
    }
    let (g, f) = text.split_once(';').ok_or_else(|| Failure::Usage("--interior expects JSON or \"g; f\"".into()))?;
    use riordan_core::element::Component;
    Ok(ElementSpec::Riordan { g: Component::Expr(g.trim().into()), f: Component::Expr(f.trim().into()) })
}

fn inline_spec(args: &ElementArgs) -> Result<Option<ElementSpec>, Failure> {
    use riordan_core::element::Component;
    match (&args.g, &args.f) {
        (None, None) => {
            if args.almost || !args.prefix.is_empty() {
                return Err(Failure::Usage("--almost and --prefix need --g and --f".into()));
            }
            Ok(None)
        }
        (Some(g), Some(f)) => {
            let (g, f) = (Component::Expr(g.clone()), Component::Expr(f.clone()));
            if args.almost || !args.prefix.is_empty() {
                let prefix = args.prefix.iter().map(|a| Component::Expr(a.clone())).collect();
                Ok(Some(ElementSpec::Almost { order: None, prefix, g, f }))
            } else {
                Ok(Some(ElementSpec::Riordan { g, f }))
            }
        }
        _ => Err(Failure::Usage("--g and --f must be given together".into())),
    }
}

fn build_all(args: &ElementArgs, prec: usize) -> Result<Vec<Element>, Failure> {
    let params = params(args)?;
    let mut specs: Vec<ElementSpec> = inline_spec(args)?.into_iter().collect();
    for s in &args.spec {
        specs.push(read_spec(s)?);
    }
    let mut out = Vec::with_capacity(specs.len());
    for spec in &specs {
        let e = spec.build(&params, prec)?;
        for w in e.warnings() {
            eprintln!("warning: {w}");
        }
        out.push(e);
    }
    Ok(out)
}

fn single(args: &ElementArgs, prec: usize) -> Result<Element, Failure> {
    let mut all = build_all(args, prec)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        0 => Err(Failure::Usage("no element given: use --g/--f or --spec".into())),
        k => Err(Failure::Usage(format!("expected one element, got {k}"))),
    }
}

fn print_element(e: &Element, n: usize, with_matrix: bool, format: Format) -> Outcome {
    if e.prec() < n {
        return Err(Error::Precision { needed: n, have: e.prec() }.into());
    }
    let e = match e {
        Element::Riordan(r) => Element::Riordan(r.truncate(n)),
        Element::Almost(a) => Element::Almost(a.truncate(n)),
    };
    let matrix = if with_matrix { Some(e.to_matrix(n)?) } else { None };
    emit(&render::element_output(&e, matrix.as_ref(), format));
    Ok(())
}
