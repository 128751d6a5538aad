//! Expression syntax for superfunctions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' natural)?
//! atom   := natural | name | '(' expr ')' | 'exp' '(' expr ')'
//! ```
//!
//! Rationals are written as quotients, so `3/2` is `Div(3, 2)`. Division is
//! only defined by an even value with invertible body.

use std::fmt;
use std::sync::Arc;

use bvcalc_core::{DressedFunction, GeneratorTable, Rat, SuperFunction};
use num::{BigInt, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("at column {}: {msg}", .pos + 1)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Name(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Exp(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((pos, Tok::Num(text.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Tok::Name(chars[start..i].iter().map(|&(_, c)| c).collect())));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else if c == '−' {
            out.push((pos, Tok::Sym('-')));
            i += 1;
        } else {
            return err(pos, format!("unexpected character `{c}`"));
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

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            err(self.pos(), format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let pos = self.pos();
            return match self.toks.get(self.at) {
                Some((_, Tok::Num(n))) => {
                    let k = n.to_u32().ok_or(ParseError { pos, msg: "exponent too large".into() })?;
                    self.at += 1;
                    Ok(Expr::Pow(Box::new(base), k))
                }
                _ => err(pos, "expected a natural exponent"),
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.toks.get(self.at).map(|(_, t)| t.clone()) {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Name(name)) => {
                self.at += 1;
                if name == "exp" && self.eat('(') {
                    let inner = self.expr()?;
                    self.expect(')')?;
                    return Ok(Expr::Exp(Box::new(inner)));
                }
                Ok(Expr::Name(name))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(Tok::Sym(c)) => err(pos, format!("unexpected `{c}`")),
            None => err(pos, "unexpected end of input"),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, at: 0, end: src.len() };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return err(p.pos(), "trailing input");
    }
    Ok(e)
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(_) | Expr::Name(_) | Expr::Exp(_) => 5,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.prec() < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Expr::Num(n) => write!(f, "{n}")?,
            Expr::Name(s) => f.write_str(s)?,
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write(f, 3)?;
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write(f, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                b.write(f, 2)?;
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write(f, 2)?;
                f.write_str(if matches!(self, Expr::Mul(..)) { "*" } else { "/" })?;
                b.write(f, 3)?;
            }
            Expr::Pow(a, k) => {
                a.write(f, 5)?;
                write!(f, "^{k}")?;
            }
            Expr::Exp(a) => {
                f.write_str("exp(")?;
                a.write(f, 0)?;
                f.write_str(")")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }

    /// Evaluate on `table`. Errors carry no position; use [`parse_value`] for
    /// source-located messages.
    pub fn eval(&self, table: &Arc<GeneratorTable>) -> Result<DressedFunction, String> {
        let plain = |f: SuperFunction| DressedFunction::plain(f);
        Ok(match self {
            Expr::Num(n) => plain(SuperFunction::constant(table, Rat::from_integer(n.clone()))),
            Expr::Name(s) => plain(SuperFunction::named(table, s).map_err(|e| e.to_string())?),
            Expr::Neg(a) => a.eval(table)?.neg(),
            Expr::Add(a, b) => a.eval(table)?.add(&b.eval(table)?).map_err(|e| e.to_string())?,
            Expr::Sub(a, b) => a.eval(table)?.sub(&b.eval(table)?).map_err(|e| e.to_string())?,
            Expr::Mul(a, b) => a.eval(table)?.mul(&b.eval(table)?).map_err(|e| e.to_string())?,
            Expr::Div(a, b) => {
                let d = b.eval(table)?.expand_nilpotent();
                let inv = d.base().inverse().map_err(|_| "division by a value without invertible even body".to_string())?;
                let recip = DressedFunction::new(inv, -d.exponent().clone()).map_err(|e| e.to_string())?;
                a.eval(table)?.mul(&recip).map_err(|e| e.to_string())?
            }
            Expr::Pow(a, k) => {
                let v = a.eval(table)?;
                let mut out = plain(SuperFunction::one(table));
                for _ in 0..*k {
                    out = out.mul(&v).map_err(|e| e.to_string())?;
                }
                out
            }
            Expr::Exp(a) => {
                let v = a.eval(table)?.expand_nilpotent();
                if !v.is_plain() {
                    return Err("nested exp() is not supported".into());
                }
                DressedFunction::exp(v.base().clone()).map_err(|_| "exp() needs an even argument".to_string())?
            }
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

/// Parse and evaluate, reporting evaluation errors at the start of input.
pub fn parse_value(src: &str, table: &Arc<GeneratorTable>) -> Result<DressedFunction, ParseError> {
    parse(src)?.eval(table).map_err(|msg| ParseError { pos: 0, msg })
}

/// Like [`parse_value`], rejecting any `exp()` factor.
pub fn parse_function(src: &str, table: &Arc<GeneratorTable>) -> Result<SuperFunction, ParseError> {
    let v = parse_value(src, table)?;
    if !v.is_plain() {
        return err(0, "expected a function without exp() factors");
    }
    Ok(v.base().clone())
}

/// A rational literal such as `-3/2`.
pub fn parse_rational(src: &str) -> Result<Rat, ParseError> {
    fn value(e: &Expr) -> Option<Rat> {
        match e {
            Expr::Num(n) => Some(Rat::from_integer(n.clone())),
            Expr::Neg(a) => value(a).map(|r| -r),
            Expr::Div(a, b) => {
                let d = value(b)?;
                (!d.is_zero()).then(|| value(a).map(|n| n / d))?
            }
            _ => None,
        }
    }
    value(&parse(src)?).ok_or(ParseError { pos: 0, msg: format!("`{src}` is not a rational number") })
}
