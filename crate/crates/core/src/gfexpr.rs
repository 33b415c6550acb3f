//! Generating-function expressions in `x`.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := '-' factor | power
//! power    := atom ('^' exponent)?
//! exponent := signed-int | '(' signed-int ('/' ('1'|'2'))? ')'
//! atom     := number | 'x' | 'sqrt' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`. Implicit
//! multiplication is not accepted and the only identifiers are `x` and
//! `sqrt`; named parameters are substituted before parsing.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::Rational;
use crate::series::Series;

#[derive(Debug, Clone, PartialEq)]
pub enum GfAst {
    Number(Rational),
    X,
    Neg(Box<GfAst>),
    Add(Box<GfAst>, Box<GfAst>),
    Sub(Box<GfAst>, Box<GfAst>),
    Mul(Box<GfAst>, Box<GfAst>),
    Div(Box<GfAst>, Box<GfAst>),
    /// Exponent denominator is always 1 or 2.
    Pow(Box<GfAst>, Rational),
    Sqrt(Box<GfAst>),
}

impl fmt::Display for GfAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GfAst::Number(r) if r.is_integer() && !r.is_negative() => write!(f, "{r}"),
            GfAst::Number(r) => write!(f, "({r})"),
            GfAst::X => write!(f, "x"),
            GfAst::Neg(a) => write!(f, "(-{a})"),
            GfAst::Add(a, b) => write!(f, "({a}+{b})"),
            GfAst::Sub(a, b) => write!(f, "({a}-{b})"),
            GfAst::Mul(a, b) => write!(f, "({a}*{b})"),
            GfAst::Div(a, b) => write!(f, "({a}/{b})"),
            GfAst::Pow(a, e) => write!(f, "{a}^({e})"),
            GfAst::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            let lit = &text[start..i];
            let value = lit
                .parse::<Rational>()
                .map_err(|_| Error::Syntax { pos: start, msg: format!("bad number `{lit}`") })?;
            out.push((start, Tok::Num(value)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            let ch = text[i..].chars().next().unwrap_or(c);
            return Err(Error::Syntax { pos: i, msg: format!("unexpected character `{ch}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected `{c}`")))
        }
    }

    fn unexpected(&self, what: &str) -> Error {
        let found = match self.peek() {
            None => "end of input".to_string(),
            Some(Tok::Num(n)) => format!("number `{n}`"),
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Sym(c)) => format!("`{c}`"),
        };
        Error::Syntax { pos: self.pos(), msg: format!("{what}, found {found}") }
    }

    fn expr(&mut self) -> Result<GfAst> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = GfAst::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = GfAst::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<GfAst> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = GfAst::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat('/') {
                lhs = GfAst::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<GfAst> {
        if self.eat('-') {
            return Ok(GfAst::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<GfAst> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.exponent()?;
            return Ok(GfAst::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<Rational> {
        let negative = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Num(n)) if n.is_integer() => {
                self.at += 1;
                Ok(if negative { -n } else { n })
            }
            _ => Err(self.unexpected("expected an integer exponent")),
        }
    }

    fn exponent(&mut self) -> Result<Rational> {
        if !self.eat('(') {
            return self.signed_int();
        }
        let numer = self.signed_int()?;
        let mut e = numer.clone();
        if self.eat('/') {
            let pos = self.pos();
            let d = self.signed_int()?;
            if d != Rational::from(1) && d != Rational::from(2) {
                return Err(Error::Syntax { pos, msg: "exponent denominator must be 1 or 2".into() });
            }
            e = numer.checked_div(&d)?;
        }
        self.expect(')')?;
        Ok(e)
    }

    fn atom(&mut self) -> Result<GfAst> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(GfAst::Number(n))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match name.as_str() {
                    "x" => Ok(GfAst::X),
                    "sqrt" => {
                        self.expect('(')?;
                        let inner = self.expr()?;
                        self.expect(')')?;
                        Ok(GfAst::Sqrt(Box::new(inner)))
                    }
                    _ => Err(Error::UnknownIdentifier { name, pos }),
                }
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            _ => Err(self.unexpected("expected a number, `x`, `sqrt(` or `(`")),
        }
    }
}

pub fn parse(text: &str) -> Result<GfAst> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, at: 0, end: text.len() };
    let ast = p.expr()?;
    if p.at != p.toks.len() {
        return Err(p.unexpected("expected an operator or end of input"));
    }
    Ok(ast)
}

const MAX_RETRIES: usize = 8;

/// Expands `ast` to exactly `prec` coefficients.
///
/// Division by a series of positive valuation costs precision, so the
/// expansion is attempted at `prec + guard` and the guard grows until the
/// certified precision reaches `prec`.
pub fn evaluate(ast: &GfAst, prec: usize) -> Result<Series> {
    let prec = prec.max(1);
    let mut guard = 0usize;
    let mut last_shortfall = Error::Precision { needed: prec, have: 0 };
    for _ in 0..=MAX_RETRIES {
        let deficit = match eval_at(ast, prec + guard) {
            Ok(s) if s.prec() >= prec => return Ok(s.truncate(prec)),
            Ok(s) => prec - s.prec(),
            Err(e @ Error::Precision { .. }) => {
                last_shortfall = e;
                prec
            }
            Err(e) => return Err(e),
        };
        guard = (2 * guard).max(guard + deficit).max(1);
    }
    Err(last_shortfall)
}

pub fn parse_and_evaluate(text: &str, prec: usize) -> Result<Series> {
    evaluate(&parse(text)?, prec)
}

fn sqrt_general(u: &Series) -> Result<Series> {
    let v = u.valuation();
    if v >= u.prec() {
        return Err(Error::Precision { needed: u.prec() + 1, have: u.prec() });
    }
    if v % 2 == 1 {
        return Err(Error::OddValuation(v));
    }
    let w = u.shift_div(v)?;
    let c = w.coeffs()[0].clone();
    let root = c.sqrt().ok_or_else(|| Error::NotPerfectSquare(c.to_string()))?;
    let s = w.scale(&c.recip()?).sqrt()?.scale(&root);
    Ok(s.shift_mul(v / 2))
}

fn eval_at(ast: &GfAst, p: usize) -> Result<Series> {
    Ok(match ast {
        GfAst::Number(r) => Series::constant(r.clone(), p),
        GfAst::X => Series::x(p),
        GfAst::Neg(a) => eval_at(a, p)?.neg(),
        GfAst::Add(a, b) => eval_at(a, p)?.add(&eval_at(b, p)?),
        GfAst::Sub(a, b) => eval_at(a, p)?.sub(&eval_at(b, p)?),
        GfAst::Mul(a, b) => eval_at(a, p)?.mul(&eval_at(b, p)?)?,
        GfAst::Div(a, b) => eval_at(a, p)?.div(&eval_at(b, p)?)?,
        GfAst::Sqrt(a) => sqrt_general(&eval_at(a, p)?)?,
        GfAst::Pow(a, e) => {
            let base = eval_at(a, p)?;
            let v = base.valuation();
            if e.is_zero() {
                return Ok(Series::one(p));
            }
            if v >= base.prec() {
                return Err(Error::Precision { needed: base.prec() + 1, have: base.prec() });
            }
            if e.is_negative() && v > 0 {
                return Err(Error::Pole);
            }
            if e.is_integer() {
                base.pow_rational(e)?
            } else {
                let n = i64::try_from(e.numer()).map_err(|_| Error::BadExponent(e.to_string()))?;
                sqrt_general(&base)?.pow_int(n)?
            }
        }
    })
}
