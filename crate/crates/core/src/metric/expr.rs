//! Real functions of x in a small prefix grammar:
//!
//! ```text
//! expr := number | x
//!       | (add expr expr ...) | (sub expr expr) | (mul expr expr ...)
//!       | (neg expr) | (scale number expr) | (pow expr k)
//!       | (atan expr) | (tanh expr) | (gauss c) | (recip expr)
//! ```
//!
//! `(gauss c)` is e^{-c x²}; `k` in `pow` is a non-negative integer.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    X,
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, u32),
    Atan(Box<Expr>),
    Tanh(Box<Expr>),
    /// e^{-c x²}
    Gauss(f64),
    Recip(Box<Expr>),
}

impl Expr {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::X => x,
            Expr::Add(terms) => terms.iter().map(|t| t.eval(x)).sum(),
            Expr::Mul(terms) => terms.iter().map(|t| t.eval(x)).product(),
            Expr::Pow(e, k) => e.eval(x).powi(*k as i32),
            Expr::Atan(e) => e.eval(x).atan(),
            Expr::Tanh(e) => e.eval(x).tanh(),
            Expr::Gauss(c) => (-c * x * x).exp(),
            Expr::Recip(e) => 1.0 / e.eval(x),
        }
    }

    /// Symbolic d/dx, lightly simplified.
    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::X => Expr::Const(1.0),
            Expr::Add(terms) => add(terms.iter().map(Expr::derivative).collect()),
            Expr::Mul(terms) => add((0..terms.len())
                .map(|i| {
                    let mut factors = terms.clone();
                    factors[i] = terms[i].derivative();
                    mul(factors)
                })
                .collect()),
            Expr::Pow(_, 0) => Expr::Const(0.0),
            Expr::Pow(e, k) => mul(vec![
                Expr::Const(*k as f64),
                pow((**e).clone(), k - 1),
                e.derivative(),
            ]),
            Expr::Atan(e) => mul(vec![
                e.derivative(),
                Expr::Recip(Box::new(add(vec![Expr::Const(1.0), pow((**e).clone(), 2)]))),
            ]),
            Expr::Tanh(e) => mul(vec![
                e.derivative(),
                add(vec![
                    Expr::Const(1.0),
                    mul(vec![Expr::Const(-1.0), pow(Expr::Tanh(e.clone()), 2)]),
                ]),
            ]),
            Expr::Gauss(c) => mul(vec![Expr::Const(-2.0 * c), Expr::X, Expr::Gauss(*c)]),
            Expr::Recip(e) => mul(vec![
                Expr::Const(-1.0),
                e.derivative(),
                pow(Expr::Recip(e.clone()), 2),
            ]),
        }
    }

    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = tokenize(src);
        let mut pos = 0;
        let e = parse_expr(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::Grammar(format!(
                "trailing input after expression in {src:?}"
            )));
        }
        Ok(e)
    }
}

fn pow(e: Expr, k: u32) -> Expr {
    match (e, k) {
        (_, 0) => Expr::Const(1.0),
        (e, 1) => e,
        (Expr::Const(c), k) => Expr::Const(c.powi(k as i32)),
        (e, k) => Expr::Pow(Box::new(e), k),
    }
}

fn add(terms: Vec<Expr>) -> Expr {
    let mut constant = 0.0;
    let mut rest = Vec::new();
    for t in terms {
        match t {
            Expr::Const(c) => constant += c,
            Expr::Add(inner) => rest.extend(inner),
            other => rest.push(other),
        }
    }
    if constant != 0.0 || rest.is_empty() {
        rest.insert(0, Expr::Const(constant));
    }
    if rest.len() == 1 {
        rest.pop().unwrap_or(Expr::Const(0.0))
    } else {
        Expr::Add(rest)
    }
}

fn mul(factors: Vec<Expr>) -> Expr {
    let mut constant = 1.0;
    let mut rest = Vec::new();
    for f in factors {
        match f {
            Expr::Const(c) => constant *= c,
            Expr::Mul(inner) => rest.extend(inner),
            other => rest.push(other),
        }
    }
    if constant == 0.0 {
        return Expr::Const(0.0);
    }
    if constant != 1.0 || rest.is_empty() {
        rest.insert(0, Expr::Const(constant));
    }
    if rest.len() == 1 {
        rest.pop().unwrap_or(Expr::Const(1.0))
    } else {
        Expr::Mul(rest)
    }
}

fn tokenize(src: &str) -> Vec<String> {
    src.replace('(', " ( ")
        .replace(')', " ) ")
        .split_whitespace()
        .map(str::to_owned)
        .collect()
}

fn number(token: Option<&String>) -> Result<f64> {
    let token =
        token.ok_or_else(|| Error::Grammar("expected a number, found end of input".into()))?;
    let v: f64 = token
        .parse()
        .map_err(|_| Error::Grammar(format!("expected a number, found {token:?}")))?;
    if !v.is_finite() {
        return Err(Error::Grammar(format!("non-finite constant {token:?}")));
    }
    Ok(v)
}

fn parse_expr(tokens: &[String], pos: &mut usize) -> Result<Expr> {
    let token = tokens
        .get(*pos)
        .ok_or_else(|| Error::Grammar("unexpected end of expression".into()))?;
    *pos += 1;
    match token.as_str() {
        "x" => Ok(Expr::X),
        ")" => Err(Error::Grammar("unexpected ')'".into())),
        "(" => {
            let head = tokens
                .get(*pos)
                .ok_or_else(|| Error::Grammar("unexpected end after '('".into()))?
                .clone();
            *pos += 1;
            let e = match head.as_str() {
                "add" | "mul" => {
                    let mut args = Vec::new();
                    while tokens.get(*pos).map(String::as_str) != Some(")") {
                        args.push(parse_expr(tokens, pos)?);
                    }
                    if args.len() < 2 {
                        return Err(Error::Grammar(format!(
                            "({head} ...) needs at least two operands"
                        )));
                    }
                    if head == "add" {
                        Expr::Add(args)
                    } else {
                        Expr::Mul(args)
                    }
                }
                "sub" => {
                    let a = parse_expr(tokens, pos)?;
                    let b = parse_expr(tokens, pos)?;
                    Expr::Add(vec![a, Expr::Mul(vec![Expr::Const(-1.0), b])])
                }
                "neg" => Expr::Mul(vec![Expr::Const(-1.0), parse_expr(tokens, pos)?]),
                "scale" => {
                    let c = number(tokens.get(*pos))?;
                    *pos += 1;
                    Expr::Mul(vec![Expr::Const(c), parse_expr(tokens, pos)?])
                }
                "pow" => {
                    let base = parse_expr(tokens, pos)?;
                    let k = tokens
                        .get(*pos)
                        .and_then(|t| t.parse::<u32>().ok())
                        .ok_or_else(|| {
                            Error::Grammar("pow exponent must be a non-negative integer".into())
                        })?;
                    *pos += 1;
                    Expr::Pow(Box::new(base), k)
                }
                "atan" => Expr::Atan(Box::new(parse_expr(tokens, pos)?)),
                "tanh" => Expr::Tanh(Box::new(parse_expr(tokens, pos)?)),
                "recip" => Expr::Recip(Box::new(parse_expr(tokens, pos)?)),
                "gauss" => {
                    let c = number(tokens.get(*pos))?;
                    *pos += 1;
                    Expr::Gauss(c)
                }
                other => return Err(Error::Grammar(format!("unknown operator {other:?}"))),
            };
            match tokens.get(*pos).map(String::as_str) {
                Some(")") => {
                    *pos += 1;
                    Ok(e)
                }
                _ => Err(Error::Grammar(format!("missing ')' after ({head} ...)"))),
            }
        }
        other => Ok(Expr::Const(number(Some(&other.to_owned()))?)),
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Expr::parse(s)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, head: &str, items: &[Expr]| {
            write!(f, "({head}")?;
            for item in items {
                write!(f, " {item}")?;
            }
            write!(f, ")")
        };
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::X => write!(f, "x"),
            Expr::Add(terms) => list(f, "add", terms),
            Expr::Mul(terms) => list(f, "mul", terms),
            Expr::Pow(e, k) => write!(f, "(pow {e} {k})"),
            Expr::Atan(e) => write!(f, "(atan {e})"),
            Expr::Tanh(e) => write!(f, "(tanh {e})"),
            Expr::Gauss(c) => write!(f, "(gauss {c})"),
            Expr::Recip(e) => write!(f, "(recip {e})"),
        }
    }
}
