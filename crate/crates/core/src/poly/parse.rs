//! A small recursive-descent parser for polynomial expressions.
//!
//! Grammar: sums and differences of products of factors, where a factor is
//! an integer or fraction `p/q`, a variable name (optionally with a bracketed index such as
//! `T[1;1,0]`), a parenthesized expression, or a factor raised to `^k`.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};

use super::poly::Poly;
use super::universe::VarUniverse;

pub fn parse_poly<C: Coefficient>(text: &str, universe: &Arc<VarUniverse>) -> Result<Poly<C>> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        universe,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    universe: &'a Arc<VarUniverse>,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        let text: String = self.chars.iter().collect();
        Error::Parse(format!("{msg} at offset {} in `{text}`", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr<C: Coefficient>(&mut self) -> Result<Poly<C>> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -&self.term::<C>()?
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<C: Coefficient>(&mut self) -> Result<Poly<C>> {
        let mut acc = self.power()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power<C: Coefficient>(&mut self) -> Result<Poly<C>> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| self.error("exponent out of range"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| self.error("bad integer"))
    }

    fn atom<C: Coefficient>(&mut self) -> Result<Poly<C>> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let k = C::from_bigint(self.integer()?);
                if self.peek() != Some('/') {
                    return Ok(Poly::constant(self.universe, k));
                }
                self.pos += 1;
                self.skip_ws();
                let inv = C::from_bigint(self.integer()?)
                    .unit_inverse()
                    .ok_or_else(|| self.error("denominator is not invertible in the coefficient ring"))?;
                Ok(Poly::constant(self.universe, k * inv))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_alphanumeric() || *c == '_')
                {
                    self.pos += 1;
                }
                if self.chars.get(self.pos) == Some(&'[') {
                    while self.chars.get(self.pos).is_some_and(|c| *c != ']') {
                        self.pos += 1;
                    }
                    if self.pos == self.chars.len() {
                        return Err(self.error("unterminated `[`"));
                    }
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                let v = self
                    .universe
                    .lookup(&name)
                    .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                Ok(Poly::var(self.universe, v))
            }
            _ => Err(self.error("expected a factor")),
        }
    }
}
