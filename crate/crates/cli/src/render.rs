use clap::ValueEnum;
use riordan_core::element::Element;
use riordan_core::{ClassKind, ClassReport, Series, SynthResult, TriMatrix};
use serde_json::{json, Value};

#[derive(Clone, Copy, PartialEq, ValueEnum)]
pub enum Format {
    Pretty,
    Csv,
    Json,
}

fn coeff_list<S: riordan_core::Scalar>(s: &Series<S>) -> String {
    s.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
}

fn json_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn element_json(e: &Element) -> Value {
    serde_json::to_value(e.to_spec()).expect("specs serialize")
}

pub fn matrix_output(e: &Element, m: &TriMatrix, format: Format) -> String {
    match format {
        Format::Pretty => m.to_string().trim_end().to_string(),
        Format::Csv => m.to_csv().trim_end().to_string(),
        Format::Json => {
            let spec = match e {
                Element::Riordan(r) => Element::Riordan(r.truncate(m.dim())),
                Element::Almost(a) => Element::Almost(a.truncate(m.dim())),
            };
            json_string(&json!({ "element": element_json(&spec), "dim": m.dim(), "matrix": m }))
        }
    }
}

fn components(e: &Element) -> Vec<(String, &Series)> {
    match e {
        Element::Riordan(r) => vec![("g".into(), r.g()), ("f".into(), r.f())],
        Element::Almost(a) => {
            let mut out: Vec<(String, &Series)> =
                a.prefix().iter().enumerate().map(|(i, s)| (format!("prefix[{i}]"), s)).collect();
            out.push(("g".into(), a.g()));
            out.push(("f".into(), a.f()));
            out
        }
    }
}

pub fn element_output(e: &Element, m: Option<&TriMatrix>, format: Format) -> String {
    match format {
        Format::Pretty => {
            let mut lines: Vec<String> =
                components(e).into_iter().map(|(name, s)| format!("{name}: {}", coeff_list(s))).collect();
            if let Some(m) = m {
                lines.push(String::new());
                lines.push(m.to_string().trim_end().to_string());
            }
            lines.join("\n")
        }
        Format::Csv => {
            let mut lines: Vec<String> = components(e)
                .into_iter()
                .map(|(name, s)| {
                    let cells: Vec<String> = s.coeffs().iter().map(|c| c.to_string()).collect();
                    format!("{name},{}", cells.join(","))
                })
                .collect();
            if let Some(m) = m {
                lines.push(m.to_csv().trim_end().to_string());
            }
            lines.join("\n")
        }
        Format::Json => {
            let mut v = json!({ "element": element_json(e) });
            if let Some(m) = m {
                v["dim"] = json!(m.dim());
                v["matrix"] = json!(m);
            }
            json_string(&v)
        }
    }
}

pub fn series_output(s: &Series, format: Format) -> String {
    match format {
        Format::Pretty => coeff_list(s),
        Format::Csv => s.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
        Format::Json => json_string(&json!({ "series": s })),
    }
}

fn kind_flag(kind: ClassKind) -> &'static str {
    match kind {
        ClassKind::Involution => "involution",
        ClassKind::PseudoInvolution => "pseudo",
        ClassKind::QuasiInvolution => "quasi",
        ClassKind::None => "none",
    }
}

pub fn check_output(n: usize, results: &[(ClassKind, ClassReport)], format: Format) -> String {
    match format {
        Format::Json => {
            let list: Vec<Value> = results
                .iter()
                .map(|(kind, r)| json!({ "kind": kind, "passed": r.passed(), "witness": r.witness }))
                .collect();
            json_string(&json!({ "dim": n, "results": list }))
        }
        _ => results
            .iter()
            .map(|(kind, r)| match &r.witness {
                None => format!("{} (N={n}): PASS", kind_flag(*kind)),
                Some(w) => format!("{} (N={n}): FAIL {w}", kind_flag(*kind)),
            })
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

pub fn synth_output(
    result: &SynthResult,
    verdict: Option<&ClassReport>,
    relations: bool,
    column: bool,
    format: Format,
) -> String {
    let concrete = result.concrete.as_ref();
    match format {
        Format::Json => {
            let mut v = json!({ "dim": result.dim, "free": result.free_names });
            if relations {
                let rel: serde_json::Map<String, Value> = result
                    .relations
                    .iter()
                    .map(|(k, e)| (format!("a{k}"), Value::String(e.to_string())))
                    .collect();
                v["relations"] = Value::Object(rel);
            }
            if column {
                v["column"] = json!(result.column);
                if let Some(c) = concrete {
                    v["concrete"] = json!(c);
                }
            }
            if let Some(r) = verdict {
                v["check"] = json!(r);
            }
            json_string(&v)
        }
        _ => {
            let mut lines = vec![format!("free: {}", result.free_names.join(", "))];
            if relations {
                lines.extend(result.relations.iter().map(|(k, e)| format!("a{k} = {e}")));
            }
            if column {
                lines.push(format!("column: {}", coeff_list(&result.column)));
                if let Some(c) = concrete {
                    lines.push(format!("concrete: {}", coeff_list(c)));
                }
            }
            if let Some(r) = verdict {
                lines.push(match &r.witness {
                    None => format!("check (N={}): PASS {}", r.dim, r.kind),
                    Some(w) => format!("check (N={}): FAIL {w}", r.dim),
                });
            }
            lines.join("\n")
        }
    }
}
