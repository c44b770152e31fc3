//! Monomials over a dense, 0-based variable alphabet.
//!
//! A monomial is stored sparsely as `(variable, exponent)` pairs sorted by
//! variable index, with every stored exponent strictly positive. The empty
//! monomial is the unit `1`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Index of a ring variable. Lower indices rank higher in the default order
/// (`x_0 > x_1 > ...`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VariableId(pub u32);

impl VariableId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VariableId {
    fn from(i: usize) -> Self {
        VariableId(i as u32)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    factors: Vec<(VariableId, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn var(v: VariableId) -> Self {
        Monomial { factors: vec![(v, 1)] }
    }

    pub fn var_pow(v: VariableId, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial { factors: vec![(v, e)] }
        }
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs; repeated
    /// variables are multiplied together and zero exponents dropped.
    pub fn from_pairs<I: IntoIterator<Item = (VariableId, u32)>>(pairs: I) -> Self {
        let mut factors: Vec<(VariableId, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        factors.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(VariableId, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match merged.last_mut() {
                Some((last, acc)) if *last == v => *acc += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { factors: merged }
    }

    /// Squarefree product of the given variables.
    pub fn from_vars<I: IntoIterator<Item = VariableId>>(vars: I) -> Self {
        Monomial::from_pairs(vars.into_iter().map(|v| (v, 1)))
    }

    /// Dense exponent vector over `n` variables.
    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial::from_pairs(exps.iter().enumerate().map(|(i, &e)| (VariableId::from(i), e)))
    }

    pub fn factors(&self) -> &[(VariableId, u32)] {
        &self.factors
    }

    pub fn support(&self) -> impl Iterator<Item = VariableId> + '_ {
        self.factors.iter().map(|&(v, _)| v)
    }

    pub fn exponent(&self, v: VariableId) -> u32 {
        self.factors
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// `Some(v)` when the monomial is a pure power `v^e` with `e >= 1`.
    pub fn pure_power_var(&self) -> Option<VariableId> {
        match self.factors.as_slice() {
            [(v, _)] => Some(*v),
            _ => None,
        }
    }

    /// Product of the distinct variables dividing `self`.
    pub fn squarefree_part(&self) -> Monomial {
        Monomial { factors: self.factors.iter().map(|&(v, _)| (v, 1)).collect() }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        if self.factors.len() > other.factors.len() {
            return false;
        }
        let mut it = other.factors.iter();
        'outer: for &(v, e) in &self.factors {
            for &(w, f) in it.by_ref() {
                match w.cmp(&v) {
                    Ordering::Less => continue,
                    Ordering::Equal if f >= e => continue 'outer,
                    _ => return false,
                }
            }
            return false;
        }
        true
    }

    fn merge_with(&self, other: &Monomial, f: impl Fn(u32, u32) -> u32) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() || j < b.len() {
            let (v, ea, eb) = match (a.get(i), b.get(j)) {
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        i += 1;
                        (va, ea, 0)
                    }
                    Ordering::Greater => {
                        j += 1;
                        (vb, 0, eb)
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (va, ea, eb)
                    }
                },
                (Some(&(va, ea)), None) => {
                    i += 1;
                    (va, ea, 0)
                }
                (None, Some(&(vb, eb))) => {
                    j += 1;
                    (vb, 0, eb)
                }
                (None, None) => unreachable!(),
            };
            let e = f(ea, eb);
            if e > 0 {
                out.push((v, e));
            }
        }
        Monomial { factors: out }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.merge_with(other, |a, b| a + b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        self.merge_with(other, u32::max)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        self.merge_with(other, u32::min)
    }

    /// Exact quotient `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(self.merge_with(other, |a, b| a - b))
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.gcd(other).is_one()
    }

    /// Replaces each variable by `f(variable)` and multiplies the images.
    pub fn map_vars(&self, mut f: impl FnMut(VariableId) -> VariableId) -> Monomial {
        Monomial::from_pairs(self.factors.iter().map(|&(v, e)| (f(v), e)))
    }

    /// Largest variable index occurring, if any.
    pub fn max_var(&self) -> Option<VariableId> {
        self.factors.last().map(|&(v, _)| v)
    }

    pub fn display_with<'a>(&'a self, name: &'a dyn Fn(VariableId) -> String) -> MonomialDisplay<'a> {
        MonomialDisplay { mono: self, name }
    }
}

/// Graded reverse-lexicographic comparison with the default ranking
/// `x_0 > x_1 > ...`.
///
/// Higher degree wins; on equal degree, look at the highest-index variable
/// where the exponents differ: the monomial with the smaller exponent there
/// is the larger one.
pub fn grevlex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {}
        o => return o,
    }
    let (fa, fb) = (&a.factors, &b.factors);
    let (mut i, mut j) = (fa.len(), fb.len());
    while i > 0 || j > 0 {
        let ta = if i > 0 { Some(fa[i - 1]) } else { None };
        let tb = if j > 0 { Some(fb[j - 1]) } else { None };
        match (ta, tb) {
            (Some((va, ea)), Some((vb, eb))) => match va.cmp(&vb) {
                Ordering::Equal => {
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                    i -= 1;
                    j -= 1;
                }
                // `a` has a positive exponent at a higher index than anything left in `b`.
                Ordering::Greater => return Ordering::Less,
                Ordering::Less => return Ordering::Greater,
            },
            (Some(_), None) => return Ordering::Less,
            (None, Some(_)) => return Ordering::Greater,
            (None, None) => break,
        }
    }
    Ordering::Equal
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        grevlex_cmp(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct MonomialDisplay<'a> {
    mono: &'a Monomial,
    name: &'a dyn Fn(VariableId) -> String,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.is_one() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.mono.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", (self.name)(v))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |v: VariableId| format!("x{}", v.0);
        write!(f, "{}", self.display_with(&name))
    }
}
