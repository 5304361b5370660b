//! Recursive-descent parser for the surface syntax.
//!
//! ```text
//! expr   := sign? term (("+"|"-") term)*
//! term   := factor ("*" factor)*
//! factor := primary ("^" nat)*
//! primary:= rational | "x" nat | "u[" nat (";" idxlist)? "]"
//!         | name ("[" idxlist "]")? "(x)" | "(" expr ")" | "-" factor
//! form   := sign? fterm (("+"|"-") fterm)*
//! fterm  := term | term? "*"? slot ("^" slot)*
//! slot   := "dx" nat | "du[" nat (";" idxlist)? "]"      (forms)
//!         | "Dx" nat | "Du[" nat (";" idxlist)? "]"      (multivectors)
//! ```
//!
//! Indices are 1-based. Error offsets count characters from 1.

use std::marker::PhantomData;

use crate::error::{Error, Result};
use crate::exterior::{Alternating, Co, Contra, Form, Kind, Multivector, Slot};
use crate::jet::{Expr, Generator, JetContext, MultiIndex};
use crate::scalar::{parse_ratio, Scalar};

pub fn parse_expr<S: Scalar>(text: &str, ctx: &JetContext) -> Result<Expr<S>> {
    let mut p = Parser::<S, Co>::new(text, ctx);
    let e = p.expr(false)?;
    p.finish()?;
    Ok(e)
}

pub fn parse_form<S: Scalar>(text: &str, ctx: &JetContext) -> Result<Form<S>> {
    parse_alternating::<S, Co>(text, ctx)
}

pub fn parse_multivector<S: Scalar>(text: &str, ctx: &JetContext) -> Result<Multivector<S>> {
    parse_alternating::<S, Contra>(text, ctx)
}

/// A single jet coordinate such as `u[1;1,2]`.
pub fn parse_jet_coordinate(text: &str, ctx: &JetContext) -> Result<(usize, MultiIndex)> {
    let e: Expr<crate::scalar::Rational> = parse_expr(text, ctx)?;
    let gens = e.generators();
    match (gens.iter().next(), gens.len(), e.len()) {
        (Some(Generator::U(a, index)), 1, 1) if e == Expr::u(*a, index.clone()) => Ok((*a, index.clone())),
        _ => Err(Error::Parse { offset: 1, message: format!("`{text}` is not a single jet coordinate") }),
    }
}

fn parse_alternating<S: Scalar, K: Kind>(text: &str, ctx: &JetContext) -> Result<Alternating<S, K>> {
    let mut p = Parser::<S, K>::new(text, ctx);
    let a = p.form()?;
    p.finish()?;
    Ok(a)
}

struct Parser<'a, S, K> {
    chars: Vec<char>,
    pos: usize,
    ctx: &'a JetContext,
    marker: PhantomData<(S, K)>,
}

impl<'a, S: Scalar, K: Kind> Parser<'a, S, K> {
    fn new(text: &str, ctx: &'a JetContext) -> Self {
        Self { chars: text.chars().collect(), pos: 0, ctx, marker: PhantomData }
    }

    fn error<T>(&self, at: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: at + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => self.error(self.pos, format!("expected `{c}`, found `{d}`")),
            None => self.error(self.pos, format!("expected `{c}`, found end of input")),
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.error(self.pos, format!("unexpected `{c}`")),
        }
    }

    fn starts_with(&self, at: usize, s: &str) -> bool {
        s.chars().enumerate().all(|(k, c)| self.chars.get(at + k) == Some(&c))
    }

    fn slot_ahead(&mut self) -> bool {
        self.skip_ws();
        let at = self.pos;
        let next = |k: usize| self.chars.get(at + k).copied();
        (self.starts_with(at, K::BASE) && next(2).is_some_and(|c| c.is_ascii_digit()))
            || (self.starts_with(at, K::FIBER) && next(2) == Some('['))
    }

    fn nat(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.chars.get(start) {
                Some(c) => self.error(start, format!("expected a number, found `{c}`")),
                None => self.error(start, "expected a number, found end of input"),
            };
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().or_else(|_| self.error(start, "number too large"))
    }

    /// 1-based index in `1..=bound`, returned 0-based.
    fn index(&mut self, bound: usize, what: &str) -> Result<usize> {
        let v = self.nat()?;
        if v == 0 || v > bound {
            return Err(Error::Range(format!("{what} index {v} not in 1..={bound}")));
        }
        Ok(v - 1)
    }

    fn index_list(&mut self) -> Result<MultiIndex> {
        let mut idx = vec![self.index(self.ctx.n(), "base")?];
        while self.peek() == Some(',') {
            self.pos += 1;
            idx.push(self.index(self.ctx.n(), "base")?);
        }
        let index = MultiIndex::from_indices(self.ctx.n(), &idx)?;
        self.ctx.check_index(&index)?;
        Ok(index)
    }

    /// `[α(;idxlist)?]` after `u`/`du`/`Du`.
    fn field(&mut self) -> Result<(usize, MultiIndex)> {
        self.expect('[')?;
        let alpha = self.index(self.ctx.m(), "fiber")?;
        let index = if self.peek() == Some(';') {
            self.pos += 1;
            self.index_list()?
        } else {
            MultiIndex::zero(self.ctx.n())
        };
        self.expect(']')?;
        Ok((alpha, index))
    }

    fn identifier(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn expr(&mut self, stop_at_slot: bool) -> Result<Expr<S>> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -self.term(stop_at_slot)?
            }
            Some('+') => {
                self.pos += 1;
                self.term(stop_at_slot)?
            }
            _ => self.term(stop_at_slot)?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc + self.term(stop_at_slot)?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc - self.term(stop_at_slot)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self, stop_at_slot: bool) -> Result<Expr<S>> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            let save = self.pos;
            self.pos += 1;
            if stop_at_slot && self.slot_ahead() {
                self.pos = save;
                break;
            }
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr<S>> {
        let mut base = self.primary()?;
        loop {
            self.skip_ws();
            if self.chars.get(self.pos) != Some(&'^') {
                return Ok(base);
            }
            let save = self.pos;
            self.pos += 1;
            if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos = save;
                return Ok(base);
            }
            let e = self.nat()?;
            let e = u32::try_from(e).or_else(|_| self.error(save, "exponent too large"))?;
            base = base.pow(e);
        }
    }

    fn primary(&mut self) -> Result<Expr<S>> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.chars.get(start).copied() {
            None => self.error(start, "unexpected end of input"),
            Some('(') => {
                self.pos += 1;
                let e = self.expr(false)?;
                self.expect(')')?;
                Ok(e)
            }
            Some('-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(c) if c.is_ascii_digit() => self.rational(),
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.identifier();
                if let Some(digits) = name.strip_prefix('x').filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit())) {
                    let v: usize = digits.parse().or_else(|_| self.error(start, "number too large"))?;
                    if v == 0 || v > self.ctx.n() {
                        return Err(Error::Range(format!("base index {v} not in 1..={}", self.ctx.n())));
                    }
                    return Ok(Expr::x(v - 1));
                }
                if name == "u" {
                    let (a, index) = self.field()?;
                    return Ok(Expr::u(a, index));
                }
                let Some(source) = self.ctx.opaque(&name).cloned() else {
                    return self.error(start, format!("unknown identifier `{name}`"));
                };
                let index = if self.peek() == Some('[') {
                    self.pos += 1;
                    let index = self.index_list()?;
                    self.expect(']')?;
                    index
                } else {
                    MultiIndex::zero(self.ctx.n())
                };
                self.expect('(')?;
                self.expect('x')?;
                self.expect(')')?;
                Ok(Expr::source(&source, index))
            }
            Some(c) => self.error(start, format!("unexpected `{c}`")),
        }
    }

    fn rational(&mut self) -> Result<Expr<S>> {
        let start = self.pos;
        let num = self.nat_text();
        let mut text = num;
        // `/` binds only between two literals
        let save = self.pos;
        if self.peek() == Some('/') {
            self.pos += 1;
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                let den = self.nat_text();
                text = format!("{text}/{den}");
            } else {
                self.pos = save;
            }
        }
        match parse_ratio::<S>(&text) {
            Some(v) => Ok(Expr::constant(v)),
            None => self.error(start, format!("invalid number `{text}`")),
        }
    }

    fn nat_text(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn slot(&mut self) -> Result<Slot> {
        self.skip_ws();
        let start = self.pos;
        if self.starts_with(start, K::BASE) {
            self.pos += 2;
            let v = self.nat()?;
            if v == 0 || v > self.ctx.n() {
                return Err(Error::Range(format!("base index {v} not in 1..={}", self.ctx.n())));
            }
            Ok(Slot::Base(v - 1))
        } else if self.starts_with(start, K::FIBER) {
            self.pos += 2;
            let (a, index) = self.field()?;
            Ok(Slot::Fiber(a, index))
        } else {
            self.error(start, format!("expected `{}` or `{}`", K::BASE, K::FIBER))
        }
    }

    fn fterm(&mut self) -> Result<Alternating<S, K>> {
        let coefficient = if self.slot_ahead() { Expr::one() } else { self.term(true)? };
        if self.peek() == Some('*') {
            self.pos += 1;
            if !self.slot_ahead() {
                return self.error(self.pos, "expected a basis element after `*`");
            }
        }
        let mut slots = Vec::new();
        if self.slot_ahead() {
            slots.push(self.slot()?);
            loop {
                self.skip_ws();
                if self.chars.get(self.pos) != Some(&'^') {
                    break;
                }
                self.pos += 1;
                slots.push(self.slot()?);
            }
        }
        Ok(Alternating::monomial(coefficient, slots))
    }

    fn form(&mut self) -> Result<Alternating<S, K>> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -self.fterm()?
            }
            Some('+') => {
                self.pos += 1;
                self.fterm()?
            }
            _ => self.fterm()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc + self.fterm()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc - self.fterm()?;
                }
                _ => return Ok(acc),
            }
        }
    }
}
