//! Text grammar:
//!
//! ```text
//! poly   := term ('+' term)*
//! term   := factor ('*' factor)*
//! factor := name ('^' nat)? | 'v' ('^' int)? | nat
//! ```
//!
//! Whitespace is insignificant. Integer factors are read mod 2, so `0`
//! alone is the zero polynomial and `1` is the unit monomial.

use std::sync::Arc;

use thiserror::Error;

use super::{Monomial, Poly, PolyRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
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

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos, message: message.into() }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => {}
            _ => return None,
        }
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()
    }

    fn integer(&mut self, signed: bool) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if signed && self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                let e = ParseError { pos: start, message: "integer out of range".into() };
                e
            })
    }
}

pub(super) fn parse_poly(text: &str, ring: &Arc<PolyRing>) -> Result<Poly, ParseError> {
    let mut lx = Lexer { src: text.as_bytes(), pos: 0 };
    if lx.peek().is_none() {
        return Err(lx.err("empty input"));
    }
    let mut terms = Vec::new();
    loop {
        if let Some(m) = parse_term(&mut lx, ring)? {
            terms.push(m);
        }
        if !lx.eat(b'+') {
            break;
        }
    }
    if lx.peek().is_some() {
        return Err(lx.err(format!("unexpected character `{}`", lx.src[lx.pos] as char)));
    }
    Ok(Poly::from_terms(ring, terms))
}

/// `None` when the term carries an even integer coefficient.
fn parse_term(lx: &mut Lexer<'_>, ring: &Arc<PolyRing>) -> Result<Option<Monomial>, ParseError> {
    let mut m = Monomial::one();
    let mut vanishes = false;
    loop {
        match lx.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = lx.integer(false)?;
                vanishes |= n % 2 == 0;
            }
            Some(_) => {
                let at = lx.pos;
                let name = lx.ident().ok_or_else(|| lx.err("expected a variable, `v` or an integer"))?;
                if name == "v" {
                    let k = if lx.eat(b'^') { lx.integer(true)? } else { 1 };
                    let k = i32::try_from(k).map_err(|_| lx.err("v-exponent out of range"))?;
                    m = m.with_v(m.v_exp().checked_add(k).ok_or_else(|| lx.err("v-exponent overflow"))?);
                } else {
                    let i = ring.vars().index_of(name).ok_or(ParseError {
                        pos: at,
                        message: format!("unknown variable `{name}`"),
                    })?;
                    let e = if lx.eat(b'^') { lx.integer(false)? } else { 1 };
                    let e = u16::try_from(e).map_err(|_| lx.err("exponent out of range"))?;
                    let total = m.exp(i).checked_add(e).ok_or_else(|| lx.err("exponent overflow"))?;
                    m.set_exp(i, total);
                }
            }
            None => return Err(lx.err("unexpected end of input")),
        }
        if !lx.eat(b'*') {
            break;
        }
    }
    Ok(if vanishes { None } else { Some(m) })
}
