//! Monomial ideals ("concepts") stored by their minimal generating set.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::monomial::{Monomial, VariableId};

/// A monomial ideal, held as its unique minimal generating set sorted in
/// descending grevlex order. The zero ideal has no generators; the unit ideal
/// is generated by `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Concept {
    mingen: Vec<Monomial>,
}

/// Reduces a generating set to its minimal generators.
pub fn minimalize<I: IntoIterator<Item = Monomial>>(gens: I) -> Concept {
    let mut gens: Vec<Monomial> = gens.into_iter().collect();
    gens.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.cmp(a)));
    gens.dedup();
    let mut kept: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !kept.iter().any(|k| k.divides(&g)) {
            kept.push(g);
        }
    }
    kept.sort_by(|a, b| b.cmp(a));
    Concept { mingen: kept }
}

impl Concept {
    pub fn zero() -> Self {
        Concept { mingen: Vec::new() }
    }

    pub fn unit() -> Self {
        Concept { mingen: vec![Monomial::one()] }
    }

    pub fn principal(m: Monomial) -> Self {
        Concept { mingen: vec![m] }
    }

    /// The ideal generated by the given variables.
    pub fn simple<I: IntoIterator<Item = VariableId>>(vars: I) -> Self {
        minimalize(vars.into_iter().map(Monomial::var))
    }

    pub fn mingen(&self) -> &[Monomial] {
        &self.mingen
    }

    pub fn into_mingen(self) -> Vec<Monomial> {
        self.mingen
    }

    pub fn len(&self) -> usize {
        self.mingen.len()
    }

    pub fn is_zero(&self) -> bool {
        self.mingen.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.mingen.len() == 1 && self.mingen[0].is_one()
    }

    /// Every generator squarefree and the ideal proper.
    pub fn is_basic(&self) -> bool {
        !self.is_unit() && self.mingen.iter().all(Monomial::is_squarefree)
    }

    /// Every generator is a single variable.
    pub fn is_simple(&self) -> bool {
        self.mingen.iter().all(|g| g.degree() == 1)
    }

    /// Variables occurring in some generator, ascending.
    pub fn support(&self) -> Vec<VariableId> {
        let mut vars: Vec<VariableId> = self.mingen.iter().flat_map(|g| g.support()).collect();
        vars.sort();
        vars.dedup();
        vars
    }

    pub fn member(&self, m: &Monomial) -> bool {
        self.mingen.iter().any(|g| g.divides(m))
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Concept) -> bool {
        other.mingen.iter().all(|g| self.member(g))
    }

    pub fn sum(&self, other: &Concept) -> Concept {
        minimalize(self.mingen.iter().chain(other.mingen.iter()).cloned())
    }

    pub fn product(&self, other: &Concept) -> Concept {
        minimalize(self.mingen.iter().flat_map(|g| other.mingen.iter().map(move |h| g.mul(h))))
    }

    pub fn intersect(&self, other: &Concept) -> Concept {
        minimalize(self.mingen.iter().flat_map(|g| other.mingen.iter().map(move |h| g.lcm(h))))
    }

    pub fn radical(&self) -> Concept {
        minimalize(self.mingen.iter().map(Monomial::squarefree_part))
    }

    /// Sum of a sequence of concepts; the empty sum is the zero ideal.
    pub fn sum_all<'a, I: IntoIterator<Item = &'a Concept>>(items: I) -> Concept {
        minimalize(items.into_iter().flat_map(|c| c.mingen.iter().cloned()))
    }

    /// Intersection of a sequence of concepts; the empty intersection is the unit ideal.
    pub fn intersect_all<'a, I: IntoIterator<Item = &'a Concept>>(items: I) -> Concept {
        items.into_iter().fold(Concept::unit(), |acc, c| acc.intersect(c))
    }

    /// Applies a variable substitution to every generator and re-minimalizes.
    pub fn map_vars(&self, mut f: impl FnMut(VariableId) -> VariableId) -> Concept {
        minimalize(self.mingen.iter().map(|g| g.map_vars(&mut f)))
    }

    pub fn display_with<'a>(&'a self, name: &'a dyn Fn(VariableId) -> String) -> ConceptDisplay<'a> {
        ConceptDisplay { concept: self, name }
    }
}

pub struct ConceptDisplay<'a> {
    concept: &'a Concept,
    name: &'a dyn Fn(VariableId) -> String,
}

impl fmt::Display for ConceptDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.concept.is_zero() {
            return write!(f, "<0>");
        }
        write!(f, "<")?;
        for (i, g) in self.concept.mingen.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", g.display_with(self.name))?;
        }
        write!(f, ">")
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |v: VariableId| format!("x{}", v.0);
        write!(f, "{}", self.display_with(&name))
    }
}
