//! Element specs: the JSON and flag form of a Riordan or almost-Riordan array.
//!
//! ```json
//! {"type":"riordan","g":"1/(1-x)","f":"x/(1-x)"}
//! {"type":"almost","order":1,"prefix":["(1+4*x)/(1-x)"],"g":"1/(1-x)^2","f":"x/(1-x)"}
//! ```
//!
//! A component is either an expression in `x` or a list of coefficients
//! (strings or integers). Named parameters are substituted into expressions
//! before parsing, whole identifiers only.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::almost::AlmostRiordan;
use crate::error::{Error, Result};
use crate::gfexpr::parse_and_evaluate;
use crate::riordan::RiordanArray;
use crate::scalars::Rational;
use crate::series::Series;
use crate::trimat::TriMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Component {
    Expr(String),
    Coeffs(Vec<Coeff>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ElementSpec {
    Riordan {
        g: Component,
        f: Component,
    },
    Almost {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order: Option<usize>,
        prefix: Vec<Component>,
        g: Component,
        f: Component,
    },
}

/// Replaces every identifier equal to a parameter name by `(value)`.
pub fn substitute_params(text: &str, params: &BTreeMap<String, Rational>) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.char_indices().peekable();
    while let Some((start, c)) = chars.next() {
        if c.is_ascii_alphabetic() || c == '_' {
            let mut end = start + c.len_utf8();
            while let Some(&(i, d)) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    end = i + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let ident = &text[start..end];
            match params.get(ident) {
                Some(v) => out.push_str(&format!("({v})")),
                None => out.push_str(ident),
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// Parses `name=value` with a rational value.
pub fn parse_param(text: &str) -> Result<(String, Rational)> {
    let (name, value) = text.split_once('=').ok_or_else(|| Error::Spec(format!("expected name=value, got `{text}`")))?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') || name == "x" {
        return Err(Error::Spec(format!("bad parameter name `{name}`")));
    }
    let value = value.trim().parse::<Rational>().map_err(|_| Error::Spec(format!("bad value for `{name}`: `{value}`")))?;
    Ok((name.to_string(), value))
}

impl Component {
    fn build(&self, params: &BTreeMap<String, Rational>, prec: usize) -> Result<Series> {
        match self {
            Component::Expr(text) => parse_and_evaluate(&substitute_params(text, params), prec),
            Component::Coeffs(list) => {
                let coeffs = list
                    .iter()
                    .take(prec)
                    .map(|c| match c {
                        Coeff::Int(n) => Ok(Rational::from(*n)),
                        Coeff::Text(t) => t.parse::<Rational>().map_err(|_| Error::Spec(format!("bad coefficient `{t}`"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                if coeffs.is_empty() {
                    return Err(Error::Spec("empty coefficient list".into()));
                }
                Series::new(coeffs)
            }
        }
    }

    fn from_series(s: &Series) -> Self {
        Component::Coeffs(s.coeffs().iter().map(|c| Coeff::Text(c.to_string())).collect())
    }
}

impl ElementSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("specs serialize")
    }

    /// Evaluates every component to `prec` coefficients. Coefficient lists
    /// shorter than `prec` lower the precision of the whole element.
    pub fn build(&self, params: &BTreeMap<String, Rational>, prec: usize) -> Result<Element> {
        match self {
            ElementSpec::Riordan { g, f } => {
                Ok(Element::Riordan(RiordanArray::new(g.build(params, prec)?, f.build(params, prec)?)?))
            }
            ElementSpec::Almost { order, prefix, g, f } => {
                if let Some(m) = order {
                    if *m != prefix.len() {
                        return Err(Error::Spec(format!("order {m} but {} prefix series", prefix.len())));
                    }
                }
                let prefix = prefix.iter().map(|a| a.build(params, prec)).collect::<Result<Vec<_>>>()?;
                Ok(Element::Almost(AlmostRiordan::new(prefix, g.build(params, prec)?, f.build(params, prec)?)?))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    Riordan(RiordanArray),
    Almost(AlmostRiordan),
}

impl Element {
    pub fn order(&self) -> usize {
        match self {
            Element::Riordan(_) => 0,
            Element::Almost(a) => a.order(),
        }
    }

    pub fn prec(&self) -> usize {
        match self {
            Element::Riordan(r) => r.prec(),
            Element::Almost(a) => a.prec(),
        }
    }

    pub fn warnings(&self) -> Vec<String> {
        match self {
            Element::Riordan(r) => r.warnings(),
            Element::Almost(a) => a.warnings(),
        }
    }

    fn as_almost(&self) -> AlmostRiordan {
        match self {
            Element::Riordan(r) => AlmostRiordan::from_riordan(r),
            Element::Almost(a) => a.clone(),
        }
    }

    pub fn to_matrix(&self, n: usize) -> Result<TriMatrix> {
        match self {
            Element::Riordan(r) => r.to_matrix(n),
            Element::Almost(a) => a.to_matrix(n),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Element::Riordan(a), Element::Riordan(b)) => Ok(Element::Riordan(a.mul(b)?)),
            _ => Ok(Element::Almost(self.as_almost().mul(&other.as_almost())?)),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        match self {
            Element::Riordan(r) => Ok(Element::Riordan(r.inverse()?)),
            Element::Almost(a) => Ok(Element::Almost(a.inverse()?)),
        }
    }

    pub fn pow(&self, p: i64) -> Result<Self> {
        match self {
            Element::Riordan(r) => Ok(Element::Riordan(r.pow(p)?)),
            Element::Almost(a) => Ok(Element::Almost(a.pow(p)?)),
        }
    }

    pub fn apply(&self, h: &Series) -> Result<Series> {
        match self {
            Element::Riordan(r) => r.apply(h),
            Element::Almost(a) => a.apply(h),
        }
    }

    /// Coefficient-list spec, which rebuilds this element exactly.
    pub fn to_spec(&self) -> ElementSpec {
        match self {
            Element::Riordan(r) => {
                ElementSpec::Riordan { g: Component::from_series(r.g()), f: Component::from_series(r.f()) }
            }
            Element::Almost(a) => ElementSpec::Almost {
                order: Some(a.order()),
                prefix: a.prefix().iter().map(Component::from_series).collect(),
                g: Component::from_series(a.g()),
                f: Component::from_series(a.f()),
            },
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Riordan(r) => write!(f, "{r}"),
            Element::Almost(a) => write!(f, "{a}"),
        }
    }
}
