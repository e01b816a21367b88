//! Canonical text serialization (nested prefix form) and its parser, plus a
//! structured JSON tree export. `parse(print(e)) == e` for every canonical
//! form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};
use thiserror::Error;

use super::expr::Expr;
use super::poly::{Poly, Scalar};
use super::rational::Rx;
use super::vars::parse_var;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token {0:?}")]
    UnexpectedToken(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("bad numeric literal {0:?}")]
    BadNumber(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

fn scalar_str(c: &Scalar) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn print_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (m, c) in p.terms.iter().rev() {
        let mut factors = Vec::new();
        if !c.is_one() || m.is_one() {
            factors.push(scalar_str(c));
        }
        for &(v, e) in &m.0 {
            if e == 1 {
                factors.push(v.to_string());
            } else {
                factors.push(format!("(^ {v} {e})"));
            }
        }
        parts.push(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            format!("(* {})", factors.join(" "))
        });
    }
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        format!("(+ {})", parts.join(" "))
    }
}

/// Canonical text form of a rational function.
pub fn print(e: &Rx) -> String {
    match e.as_poly() {
        Some(p) => print_poly(p),
        None => format!("(/ {} {})", print_poly(e.num()), print_poly(e.den())),
    }
}

fn tokenize(s: &str) -> Vec<String> {
    let mut toks = Vec::new();
    let mut cur = String::new();
    let mut chars = s.chars().peekable();
    while let Some(ch) = chars.next() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    toks.push(std::mem::take(&mut cur));
                }
                toks.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    toks.push(std::mem::take(&mut cur));
                }
            }
            '[' => {
                // keep bracket contents glued to the variable token
                cur.push('[');
                for c2 in chars.by_ref() {
                    cur.push(c2);
                    if c2 == ']' {
                        break;
                    }
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        toks.push(cur);
    }
    toks
}

fn parse_atom(tok: &str) -> Result<Expr, ParseError> {
    if let Some(v) = parse_var(tok) {
        return Ok(Expr::Var(v));
    }
    let first = tok.chars().next().ok_or(ParseError::UnexpectedEnd)?;
    if first.is_ascii_digit() || first == '-' {
        if let Some((n, d)) = tok.split_once('/') {
            let n: BigInt = n.parse().map_err(|_| ParseError::BadNumber(tok.into()))?;
            let d: BigInt = d.parse().map_err(|_| ParseError::BadNumber(tok.into()))?;
            return Ok(Expr::Const(BigRational::new(n, d)));
        }
        let n: BigInt = tok.parse().map_err(|_| ParseError::BadNumber(tok.into()))?;
        return Ok(Expr::Const(BigRational::from(n)));
    }
    Err(ParseError::UnknownVariable(tok.to_string()))
}

fn parse_expr(toks: &[String], pos: &mut usize) -> Result<Expr, ParseError> {
    let tok = toks.get(*pos).ok_or(ParseError::UnexpectedEnd)?;
    *pos += 1;
    if tok != "(" {
        return parse_atom(tok);
    }
    let op = toks.get(*pos).ok_or(ParseError::UnexpectedEnd)?.clone();
    *pos += 1;
    let mut args = Vec::new();
    while toks.get(*pos).map(|t| t != ")").unwrap_or(false) {
        args.push(parse_expr(toks, pos)?);
    }
    if toks.get(*pos).is_none() {
        return Err(ParseError::UnexpectedEnd);
    }
    *pos += 1; // consume ')'
    match op.as_str() {
        "+" => Ok(Expr::Add(args)),
        "*" => Ok(Expr::Mul(args)),
        "-" => match args.len() {
            1 => Ok(Expr::Neg(Box::new(args.remove(0)))),
            2 => {
                let b = args.pop().unwrap();
                let a = args.pop().unwrap();
                Ok(Expr::Sub(Box::new(a), Box::new(b)))
            }
            _ => Err(ParseError::UnexpectedToken(op)),
        },
        "/" => {
            if args.len() != 2 {
                return Err(ParseError::UnexpectedToken(op));
            }
            let b = args.pop().unwrap();
            let a = args.pop().unwrap();
            Ok(Expr::Div(Box::new(a), Box::new(b)))
        }
        "^" => {
            if args.len() != 2 {
                return Err(ParseError::UnexpectedToken(op));
            }
            let k = match args.pop().unwrap() {
                Expr::Const(c) if c.denom().is_one() => {
                    use num_traits::ToPrimitive;
                    c.numer().to_i32().ok_or(ParseError::BadNumber(op))?
                }
                _ => return Err(ParseError::UnexpectedToken("^".into())),
            };
            let a = args.pop().unwrap();
            Ok(Expr::Pow(Box::new(a), k))
        }
        _ => Err(ParseError::UnexpectedToken(op)),
    }
}

/// Parse the canonical text form (or any prefix expression over the same
/// operators) into canonical `Rx`.
pub fn parse(s: &str) -> Result<Rx, ParseError> {
    let toks = tokenize(s);
    let mut pos = 0;
    let e = parse_expr(&toks, &mut pos)?;
    if pos != toks.len() {
        return Err(ParseError::UnexpectedToken(toks[pos].clone()));
    }
    Ok(e.canonicalize())
}

fn poly_json(p: &Poly) -> Value {
    json!(p
        .terms
        .iter()
        .rev()
        .map(|(m, c)| {
            json!({
                "coeff": scalar_str(c),
                "vars": m.0.iter().map(|(v, e)| json!({"var": v.to_string(), "exp": e})).collect::<Vec<_>>(),
            })
        })
        .collect::<Vec<_>>())
}

/// Structured tree export for machine consumption.
pub fn to_json(e: &Rx) -> Value {
    json!({
        "num": poly_json(e.num()),
        "den": poly_json(e.den()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        // (a^2 - b^2)/(a - b) -> a + b
        let e = parse("(/ (- (^ a[1,0] 2) (^ a[2,0] 2)) (- a[1,0] a[2,0]))").unwrap();
        let want = parse("(+ a[1,0] a[2,0])").unwrap();
        assert_eq!(e, want);
        // x * (1/x) -> 1
        let e = parse("(* u[1,0] (/ 1 u[1,0]))").unwrap();
        assert!(e.is_one());
    }

    #[test]
    fn round_trip() {
        for s in [
            "(+ (* 2 a[5,0]) (* a[2,0] a[4,0]))",
            "(/ (+ (* 2 a[5,0]) (* a[2,0] a[4,0])) a[1,0])",
            "(- (^ u[1,0] 3) (* 1/2 u[2,1]))",
            "0",
            "-7/3",
        ] {
            let e = parse(s).unwrap();
            assert_eq!(parse(&print(&e)).unwrap(), e);
        }
    }
}
