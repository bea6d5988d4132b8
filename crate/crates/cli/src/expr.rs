//! Recursive-descent parser for Orlicz function expressions in `x`.
//!
//! ```text
//! sum   := prod (('+' | '-') prod)*
//! prod  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?          exponent must not contain x
//! atom  := number | 'x' | ('abs' | 'cosh' | 'exp') '(' sum ')' | '(' sum ')'
//! ```

use std::fmt;

use ldp_core::distributions::OrliczFunction;
use thiserror::Error;

const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("{0}")]
    Semantic(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Abs(Box<Expr>),
    Cosh(Box<Expr>),
    Exp(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
}

impl Expr {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Num(c) => *c,
            Expr::X => x,
            Expr::Abs(a) => a.eval(x).abs(),
            Expr::Cosh(a) => a.eval(x).cosh(),
            Expr::Exp(a) => a.eval(x).exp(),
            Expr::Neg(a) => -a.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Pow(a, e) => {
                let b = a.eval(x);
                if e.fract() == 0.0 && e.abs() <= i32::MAX as f64 {
                    b.powi(*e as i32)
                } else {
                    b.powf(*e)
                }
            }
        }
    }

    fn has_x(&self) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::X => true,
            Expr::Abs(a) | Expr::Cosh(a) | Expr::Exp(a) | Expr::Neg(a) | Expr::Pow(a, _) => a.has_x(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.has_x() || b.has_x(),
        }
    }

    /// Builtin with a closed-form inverse, when the expression is one.
    fn builtin(&self) -> Option<OrliczFunction> {
        let is_x = |e: &Expr| matches!(e, Expr::X);
        match self {
            Expr::Pow(b, p) if *p >= 1.0 => match b.as_ref() {
                Expr::Abs(inner) if is_x(inner) => OrliczFunction::power(*p).ok(),
                Expr::X if p.fract() == 0.0 && (*p as i64) % 2 == 0 => OrliczFunction::power(*p).ok(),
                _ => None,
            },
            Expr::Abs(inner) if is_x(inner) => OrliczFunction::power(1.0).ok(),
            Expr::Sub(a, b) if **b == Expr::Num(1.0) => match a.as_ref() {
                Expr::Cosh(inner) if is_x(inner) => Some(OrliczFunction::cosh_minus_one()),
                _ => None,
            },
            _ => None,
        }
    }

    /// Validated Orlicz function `V(x) = self(x)`.
    pub fn to_orlicz(&self, label: &str) -> Result<OrliczFunction, ExprError> {
        if let Some(v) = self.builtin() {
            return Ok(v);
        }
        if !self.has_x() {
            return Err(ExprError::Semantic(format!("`{label}` does not depend on x")));
        }
        let e = self.clone();
        OrliczFunction::new(label, move |x| e.eval(x)).map_err(|err| ExprError::Semantic(format!("`{label}`: {err}")))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) => write!(f, "{c}"),
            Expr::X => write!(f, "x"),
            Expr::Abs(a) => write!(f, "abs({a})"),
            Expr::Cosh(a) => write!(f, "cosh({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Pow(a, e) => write!(f, "({a})^({e})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Parse { offset, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn enter(&mut self) -> Result<(), ExprError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err(self.pos, "expression nested too deeply");
        }
        Ok(())
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        self.enter()?;
        let mut lhs = self.prod()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.prod()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.prod()?));
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn prod(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        self.enter()?;
        let e = if self.eat('-') { Expr::Neg(Box::new(self.unary()?)) } else { self.power()? };
        self.depth -= 1;
        Ok(e)
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let at = self.pos;
        let exp = self.unary()?;
        if exp.has_x() {
            return self.err(at, "exponent must be a constant");
        }
        let e = exp.eval(0.0);
        if !e.is_finite() {
            return self.err(at, "exponent is not finite");
        }
        let base = if e.fract() != 0.0 { Expr::Abs(Box::new(base)) } else { base };
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut j = end + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if j < bytes.len() && bytes[j].is_ascii_digit() {
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                end = j;
            }
        }
        match self.src[start..end].parse::<f64>() {
            Ok(v) => {
                self.pos = end;
                Ok(Expr::Num(v))
            }
            Err(_) => self.err(start, format!("malformed number `{}`", &self.src[start..end])),
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let start = match self.peek() {
            None => return self.err(self.pos, "unexpected end of input"),
            Some(_) => self.pos,
        };
        let c = self.src[start..].chars().next().unwrap();
        if c.is_ascii_digit() || c == '.' {
            return self.number();
        }
        if self.eat('(') {
            let e = self.sum()?;
            if !self.eat(')') {
                return self.err(self.pos, "expected `)`");
            }
            return Ok(e);
        }
        if c.is_ascii_alphabetic() {
            let len = self.src[start..].bytes().take_while(|b| b.is_ascii_alphanumeric() || *b == b'_').count();
            let name = &self.src[start..start + len];
            self.pos = start + len;
            return match name {
                "x" => Ok(Expr::X),
                "abs" | "cosh" | "exp" => {
                    if !self.eat('(') {
                        return self.err(self.pos, format!("expected `(` after `{name}`"));
                    }
                    let arg = Box::new(self.sum()?);
                    if !self.eat(')') {
                        return self.err(self.pos, "expected `)`");
                    }
                    Ok(match name {
                        "abs" => Expr::Abs(arg),
                        "cosh" => Expr::Cosh(arg),
                        _ => Expr::Exp(arg),
                    })
                }
                _ => self.err(start, format!("unknown identifier `{name}`")),
            };
        }
        self.err(start, format!("unexpected character `{c}`"))
    }
}

/// Parses `src` into an expression tree.
pub fn parse_orlicz(src: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { src, pos: 0, depth: 0 };
    if p.peek().is_none() {
        return p.err(0, "empty expression");
    }
    let e = p.sum()?;
    if p.peek().is_some() {
        return p.err(p.pos, "unexpected trailing input");
    }
    Ok(e)
}

/// Parses and validates an Orlicz function.
pub fn orlicz_from_str(src: &str) -> Result<OrliczFunction, ExprError> {
    parse_orlicz(src)?.to_orlicz(src.trim())
}
