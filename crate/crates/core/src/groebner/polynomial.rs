//! Sparse multivariate polynomials with field coefficients.

use std::fmt;

use crate::groebner::order::TermOrder;
use crate::groebner::Coefficient;
use crate::monomial::{Monomial, VariableId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term<F> {
    pub coefficient: F,
    pub monomial: Monomial,
}

/// Terms are kept strictly descending under the order the polynomial was
/// built with; no two share a monomial and no coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<F> {
    terms: Vec<Term<F>>,
}

impl<F: Coefficient> Polynomial<F> {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(c, Monomial::one())
    }

    pub fn monomial(c: F, m: Monomial) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Polynomial { terms: vec![Term { coefficient: c, monomial: m }] }
        }
    }

    pub fn var(v: VariableId) -> Self {
        Self::monomial(F::one(), Monomial::var(v))
    }

    /// Collects arbitrary terms: like monomials are combined, zeros dropped.
    pub fn from_terms<I: IntoIterator<Item = (F, Monomial)>>(terms: I, ord: &TermOrder) -> Self {
        let mut raw: Vec<(F, Monomial)> = terms.into_iter().collect();
        raw.sort_by(|a, b| ord.compare(&b.1, &a.1));
        let mut out: Vec<Term<F>> = Vec::with_capacity(raw.len());
        for (c, m) in raw {
            match out.last_mut() {
                Some(t) if t.monomial == m => t.coefficient = t.coefficient.clone() + c,
                _ => out.push(Term { coefficient: c, monomial: m }),
            }
        }
        out.retain(|t| !t.coefficient.is_zero());
        Polynomial { terms: out }
    }

    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<&Term<F>> {
        self.terms.first()
    }

    /// Initial monomial; `None` for the zero polynomial.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.monomial)
    }

    pub fn leading_coefficient(&self) -> Option<&F> {
        self.terms.first().map(|t| &t.coefficient)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn variables(&self) -> Vec<VariableId> {
        let mut vs: Vec<VariableId> = self.terms.iter().flat_map(|t| t.monomial.support()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Re-sorts the terms under another order.
    pub fn reorder(&self, ord: &TermOrder) -> Self {
        Self::from_terms(self.terms.iter().map(|t| (t.coefficient.clone(), t.monomial.clone())), ord)
    }

    fn merge(&self, other: &Self, scale_other: F, ord: &TermOrder) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match ord.compare(&a[i].monomial, &b[j].monomial) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(Term { coefficient: b[j].coefficient.clone() * scale_other.clone(), monomial: b[j].monomial.clone() });
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = a[i].coefficient.clone() + b[j].coefficient.clone() * scale_other.clone();
                    if !c.is_zero() {
                        out.push(Term { coefficient: c, monomial: a[i].monomial.clone() });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|t| Term { coefficient: t.coefficient.clone() * scale_other.clone(), monomial: t.monomial.clone() }));
        Polynomial { terms: out }
    }

    pub fn add(&self, other: &Self, ord: &TermOrder) -> Self {
        self.merge(other, F::one(), ord)
    }

    pub fn sub(&self, other: &Self, ord: &TermOrder) -> Self {
        self.merge(other, -F::one(), ord)
    }

    /// `self - c·m·other`, the workhorse of reduction.
    pub fn sub_scaled(&self, c: &F, m: &Monomial, other: &Self, ord: &TermOrder) -> Self {
        self.merge(&other.mul_monomial(m), -c.clone(), ord)
    }

    /// Multiplication by a monomial keeps the term order.
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial { terms: self.terms.iter().map(|t| Term { coefficient: t.coefficient.clone(), monomial: t.monomial.mul(m) }).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial { terms: self.terms.iter().map(|t| Term { coefficient: t.coefficient.clone() * c.clone(), monomial: t.monomial.clone() }).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    pub fn mul(&self, other: &Self, ord: &TermOrder) -> Self {
        Self::from_terms(
            self.terms.iter().flat_map(|a| {
                other.terms.iter().map(move |b| (a.coefficient.clone() * b.coefficient.clone(), a.monomial.mul(&b.monomial)))
            }),
            ord,
        )
    }

    /// Divides through by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            None => Self::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&(F::one() / lc.clone())),
        }
    }

    pub fn display_with<'a>(&'a self, name: &'a dyn Fn(VariableId) -> String) -> PolynomialDisplay<'a, F> {
        PolynomialDisplay { poly: self, name }
    }
}

pub struct PolynomialDisplay<'a, F> {
    poly: &'a Polynomial<F>,
    name: &'a dyn Fn(VariableId) -> String,
}

impl<F: Coefficient> fmt::Display for PolynomialDisplay<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, t) in self.poly.terms.iter().enumerate() {
            let negative = t.coefficient < F::zero();
            let magnitude = if negative { -t.coefficient.clone() } else { t.coefficient.clone() };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = t.monomial.display_with(self.name);
            match (magnitude.is_one(), t.monomial.is_one()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{mono}")?,
                (false, true) => write!(f, "{magnitude}")?,
                (false, false) => write!(f, "{magnitude}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl<F: Coefficient> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |v: VariableId| format!("x{}", v.0);
        write!(f, "{}", self.display_with(&name))
    }
}
