//! Recursive-descent parser for the shared expression grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := '-' factor | primary ('^' posint)?
//! primary := rational | ident | '(' expr ')'
//! ```
//!
//! Identifiers may contain dots after the first character so that prefixed
//! names such as `l.x` produced by the combinators can be read back.

use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Untyped syntax tree; converted to a [`Poly`] or to a free term by the
/// caller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(Rational),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn to_poly(&self) -> Result<Poly> {
        Ok(match self {
            Expr::Const(c) => Poly::constant(c.clone()),
            Expr::Var(v) => Poly::var(v),
            Expr::Neg(e) => -e.to_poly()?,
            Expr::Add(a, b) => a.to_poly()? + b.to_poly()?,
            Expr::Sub(a, b) => a.to_poly()? - b.to_poly()?,
            Expr::Mul(a, b) => a.to_poly()? * b.to_poly()?,
            Expr::Pow(e, k) => e.to_poly()?.pow(*k),
        })
    }

    /// Every identifier in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Expr::Neg(e) | Expr::Pow(e, _) => e.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(Error::parse(
            p.pos,
            format!("unexpected `{}`", p.src[p.pos] as char),
        ));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.eat(b'*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.primary()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            let k = self.digits();
            let k: u32 = k
                .parse()
                .ok()
                .filter(|&k| k > 0)
                .ok_or_else(|| Error::parse(start, "expected a positive integer exponent"))?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn primary(&mut self) -> Result<Expr> {
        let start = match self.peek() {
            None => return Err(Error::parse(self.pos, "unexpected end of input")),
            Some(_) => self.pos,
        };
        let c = self.src[start];
        if c == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            if !self.eat(b')') {
                return Err(Error::parse(self.pos, "expected `)`"));
            }
            return Ok(e);
        }
        if c.is_ascii_digit() {
            let num = self.digits();
            let save = self.pos;
            if self.eat(b'/') {
                self.skip_ws();
                let dpos = self.pos;
                let den = self.digits();
                if den.is_empty() {
                    return Err(Error::parse(dpos, "expected a denominator"));
                }
                let r: Rational = format!("{num}/{den}")
                    .parse()
                    .map_err(|_| Error::parse(dpos, "zero denominator"))?;
                return Ok(Expr::Const(r));
            }
            self.pos = save;
            let r: Rational = num.parse().map_err(|_| Error::parse(start, "bad integer"))?;
            return Ok(Expr::Const(r));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            self.pos += 1;
            while self.pos < self.src.len() {
                let b = self.src[self.pos];
                if b.is_ascii_alphanumeric() || b == b'_' || b == b'.' {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            return Ok(Expr::Var(name.to_string()));
        }
        Err(Error::parse(start, format!("unexpected `{}`", c as char)))
    }
}
