//! Text syntax for monomial ideals and polynomials.
//!
//! ```text
//! ideal      := '<' [monomial (',' monomial)*] '>'
//! polynomial := ['-'] term (('+' | '-') term)*
//! term       := coefficient | [coefficient '*'] monomial
//! monomial   := '1' | factor ('*' factor)*
//! factor     := name ['^' integer]
//! coefficient:= integer ['/' integer]
//! name       := [A-Za-z_#][A-Za-z0-9_#]*
//! ```
//!
//! Names are resolved through a [`VarNames`] registry: either the labels of
//! a schema (with or without an `x_` prefix) or first-seen order, so that
//! `x, y, z` become `x_0 > x_1 > x_2`.

use std::str::FromStr;

use crate::concept::{minimalize, Concept};
use crate::error::AlgebraError;
use crate::groebner::{Coefficient, Polynomial, TermOrder};
use crate::monomial::{Monomial, VariableId};
use crate::schema::Schema;

/// Maps variable names to ids.
#[derive(Clone, Debug, Default)]
pub struct VarNames {
    names: Vec<String>,
    fixed: bool,
}

impl VarNames {
    /// Registry that assigns fresh ids in order of first appearance.
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry restricted to the labels of a schema.
    pub fn from_schema(schema: &Schema) -> Self {
        VarNames { names: (0..schema.num_vars()).map(|i| schema.label(VariableId::from(i)).to_string()).collect(), fixed: true }
    }

    pub fn resolve(&mut self, name: &str) -> Option<VariableId> {
        let bare = name.strip_prefix("x_").filter(|_| self.fixed).unwrap_or(name);
        if let Some(i) = self.names.iter().position(|n| n == bare) {
            return Some(VariableId::from(i));
        }
        if self.fixed {
            return None;
        }
        self.names.push(bare.to_string());
        Some(VariableId::from(self.names.len() - 1))
    }

    pub fn name(&self, v: VariableId) -> String {
        match self.names.get(v.index()) {
            Some(n) if self.fixed => format!("x_{n}"),
            Some(n) => n.clone(),
            None => format!("x{}", v.0),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, AlgebraError> {
        Err(AlgebraError::Parse { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), AlgebraError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(&f) {
            self.pos += self.peek().unwrap().len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn integer(&mut self) -> Result<&'a str, AlgebraError> {
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            self.err("expected an integer")
        } else {
            Ok(digits)
        }
    }

    fn name(&mut self) -> &'a str {
        self.skip_ws();
        if !self.peek().is_some_and(|c| c.is_ascii_alphabetic() || c == '_' || c == '#') {
            return "";
        }
        self.take_while(|c| c.is_ascii_alphanumeric() || c == '_' || c == '#')
    }

    /// `factor ('*' factor)*`, or the literal `1`.
    fn monomial(&mut self, names: &mut VarNames) -> Result<Monomial, AlgebraError> {
        self.skip_ws();
        if self.peek() == Some('1') {
            self.pos += 1;
            return Ok(Monomial::one());
        }
        let mut pairs = Vec::new();
        loop {
            let start = self.pos;
            let n = self.name();
            if n.is_empty() {
                return self.err("expected a variable name");
            }
            let Some(v) = names.resolve(n) else {
                self.pos = start;
                return self.err(format!("unknown variable `{n}`"));
            };
            let e = if self.eat('^') {
                let digits = self.integer()?;
                digits.parse::<u32>().or_else(|_| self.err("exponent out of range"))?
            } else {
                1
            };
            pairs.push((v, e));
            self.skip_ws();
            let save = self.pos;
            if !self.eat('*') {
                break;
            }
            self.skip_ws();
            if !self.peek().is_some_and(|c| c.is_ascii_alphabetic() || c == '_' || c == '#') {
                self.pos = save;
                break;
            }
        }
        Ok(Monomial::from_pairs(pairs))
    }
}

/// Parses `<m1, m2, ...>`; the angle brackets are optional.
pub fn parse_ideal(text: &str, names: &mut VarNames) -> Result<Concept, AlgebraError> {
    let mut c = Cursor::new(text);
    let bracketed = c.eat('<');
    let mut gens = Vec::new();
    c.skip_ws();
    let empty = if bracketed { c.peek() == Some('>') } else { c.at_end() };
    if !empty {
        loop {
            c.skip_ws();
            if c.peek() == Some('0') {
                c.pos += 1;
            } else {
                gens.push(c.monomial(names)?);
            }
            if !c.eat(',') {
                break;
            }
        }
    }
    if bracketed {
        c.expect('>')?;
    }
    if !c.at_end() {
        return c.err("unexpected trailing input");
    }
    Ok(minimalize(gens))
}

/// Parses a polynomial with coefficients such as `3/2`.
pub fn parse_polynomial<F: Coefficient + FromStr>(
    text: &str,
    names: &mut VarNames,
    ord: &TermOrder,
) -> Result<Polynomial<F>, AlgebraError> {
    let mut c = Cursor::new(text);
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let negative = if c.eat('-') {
            true
        } else if first || c.eat('+') {
            false
        } else {
            break;
        };
        first = false;
        c.skip_ws();
        let coeff: F = if c.peek().is_some_and(|ch| ch.is_ascii_digit()) {
            let start = c.pos;
            let num = c.integer()?;
            let lit = if c.eat('/') { format!("{num}/{}", c.integer()?) } else { num.to_string() };
            let value = lit.parse::<F>().or_else(|_| {
                c.pos = start;
                c.err(format!("bad coefficient `{lit}`"))
            })?;
            if c.eat('*') {
                terms.push((if negative { -value } else { value }, c.monomial(names)?));
            } else {
                terms.push((if negative { -value } else { value }, Monomial::one()));
            }
            continue;
        } else {
            F::one()
        };
        let m = c.monomial(names)?;
        terms.push((if negative { -coeff } else { coeff }, m));
    }
    if !c.at_end() {
        return c.err("unexpected trailing input");
    }
    Ok(Polynomial::from_terms(terms, ord))
}

/// Comma-separated polynomials, optionally wrapped in angle brackets.
pub fn parse_polynomials<F: Coefficient + FromStr>(
    text: &str,
    names: &mut VarNames,
    ord: &TermOrder,
) -> Result<Vec<Polynomial<F>>, AlgebraError> {
    let inner = text.trim();
    let inner = inner.strip_prefix('<').and_then(|s| s.strip_suffix('>')).unwrap_or(inner);
    inner.split(',').filter(|s| !s.trim().is_empty()).map(|p| parse_polynomial(p, names, ord)).collect()
}
