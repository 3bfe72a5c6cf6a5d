//! Expression grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*      juxtaposition also multiplies
//! factor := ('-')? primary ('^' int)?
//! primary:= number | 'q' | IDENT | '(' expr ')'
//! ```
//!
//! Division is only allowed by scalars. Negative powers are allowed for
//! scalars and for products of invertible generators.

use num_bigint::BigInt;

use super::{Monomial, NcPoly, Presentation};
use crate::error::{QmaError, Result};
use crate::scalar::{RatFunc, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' | '\u{b7}' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ if c.is_ascii_digit() => {
                while i < b.len() && (b[i] as char).is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(s[start..i].parse().expect("digits"))));
                continue;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(s[start..i].to_string())));
                continue;
            }
            _ => return Err(QmaError::Parse { pos: start, msg: format!("unexpected character '{}'", c) }),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
    p: &'a Presentation,
    /// Only accept products already in normal order (rule right-hand sides
    /// are read before the rules exist).
    raw: bool,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |t| t.0)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(QmaError::Parse { pos: self.here(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<NcPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen))
    }

    fn term(&mut self) -> Result<NcPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = self.mul(&acc, &f)?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.here();
                    let f = self.factor()?;
                    let Some(c) = f.as_scalar() else {
                        return Err(QmaError::Parse { pos: at, msg: "division by a non-scalar".into() });
                    };
                    let ci = c.inv().map_err(|_| QmaError::Parse { pos: at, msg: "division by zero".into() })?;
                    acc = acc.scale(&ci);
                }
                _ if self.starts_factor() => {
                    let f = self.factor()?;
                    acc = self.mul(&acc, &f)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn mul(&self, a: &NcPoly, b: &NcPoly) -> Result<NcPoly> {
        if !self.raw {
            return Ok(self.p.mul(a, b));
        }
        let mut out = NcPoly::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let (Some(t), Some(s)) = (ma.top(), mb.bottom()) {
                    if s < t {
                        return self.err("right-hand side is not in normal order");
                    }
                }
                let m = Monomial(ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect());
                out.add_term(&m, &ca.mul(cb));
            }
        }
        Ok(out)
    }

    fn factor(&mut self) -> Result<NcPoly> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.primary()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let neg = if let Some(Tok::Minus) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            let n: i64 = match self.peek() {
                Some(Tok::Num(n)) => {
                    let v = i64::try_from(n.clone()).or_else(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    v
                }
                Some(Tok::LParen) => {
                    // Allow x^(-1).
                    self.pos += 1;
                    let e = self.expr()?;
                    if self.peek() != Some(&Tok::RParen) {
                        return self.err("expected ')'");
                    }
                    self.pos += 1;
                    let c = e.as_scalar().and_then(|c| c.as_rational());
                    match c {
                        Some(r) if r.is_integer() => i64::try_from(r.to_integer()).or_else(|_| self.err("exponent too large"))?,
                        _ => return self.err("exponent must be an integer"),
                    }
                }
                _ => return self.err("expected integer exponent"),
            };
            let n = if neg { -n } else { n };
            return self.power(&base, n);
        }
        Ok(base)
    }

    fn power(&self, base: &NcPoly, n: i64) -> Result<NcPoly> {
        if let Some(c) = base.as_scalar() {
            return c.pow(n as i32).map(|c| self.p.scalar(c)).or_else(|_| self.err("zero to a negative power"));
        }
        let b = if n < 0 {
            // Only monomials in invertible generators can be inverted.
            if base.len() != 1 {
                return self.err("negative power of a non-monomial");
            }
            let (m, c) = base.terms.iter().next().expect("one term");
            let Some(inv) = self.p.inverse_mono(m) else {
                return self.err("negative power of a non-invertible element");
            };
            inv.scale(&c.inv().expect("nonzero"))
        } else {
            base.clone()
        };
        let mut acc = self.p.one();
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &b)?;
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<NcPoly> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(self.p.scalar(RatFunc::from_rational(Rational::from_integer(n))))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "q" {
                    return Ok(self.p.scalar(RatFunc::q_pow(1)));
                }
                if let Some(g) = self.p.gen_index(&name) {
                    return Ok(self.p.gen(g));
                }
                if let Some(a) = self.p.alias(&name) {
                    return Ok(a.clone());
                }
                self.pos -= 1;
                self.err(&format!("unknown generator '{}'", name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            _ => self.err("expected a number, 'q', a generator or '('"),
        }
    }
}

fn run(text: &str, p: &Presentation, raw: bool) -> Result<NcPoly> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(QmaError::Parse { pos: 0, msg: "empty expression".into() });
    }
    let mut ps = Parser { toks, pos: 0, len: text.len(), p, raw };
    let e = ps.expr()?;
    if ps.pos != ps.toks.len() {
        return ps.err("unexpected trailing input");
    }
    Ok(e)
}

/// Parses an expression and returns its normal form.
pub fn parse_expr(text: &str, p: &Presentation) -> Result<NcPoly> {
    run(text, p, false)
}

/// Parses an expression whose products are already in normal order.
pub(crate) fn parse_normal(text: &str, p: &Presentation) -> Result<NcPoly> {
    run(text, p, true)
}
