//! Exact polynomial arithmetic and Buchberger's algorithm.
//!
//! Used as an independent oracle for the combinatorial monomial-ideal code:
//! ideal membership by normal forms and ideal intersection by elimination.

pub mod order;
pub mod polynomial;

use std::collections::VecDeque;
use std::fmt;
use std::ops::Neg;

use num_traits::{NumOps, One, Zero};

use crate::error::AlgebraError;
use crate::monomial::{Monomial, VariableId};

pub use order::{GrevlexOrder, TermOrder};
pub use polynomial::{Polynomial, Term};

/// Field of coefficients. Exact types (`BigRational`) are the intended
/// instantiation; floating point satisfies the bounds but loses exactness.
pub trait Coefficient:
    Clone + PartialEq + PartialOrd + fmt::Debug + fmt::Display + Zero + One + NumOps + Neg<Output = Self>
{
}

impl<T> Coefficient for T where
    T: Clone + PartialEq + PartialOrd + fmt::Debug + fmt::Display + Zero + One + NumOps + Neg<Output = T>
{
}

/// Upper bound on S-pair reductions before Buchberger gives up.
pub const DEFAULT_PAIR_BOUND: usize = 200_000;

#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis<F> {
    elements: Vec<Polynomial<F>>,
    order: TermOrder,
}

impl<F: Coefficient> GroebnerBasis<F> {
    pub fn elements(&self) -> &[Polynomial<F>] {
        &self.elements
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn into_elements(self) -> Vec<Polynomial<F>> {
        self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements.iter().filter_map(|p| p.leading_monomial().cloned()).collect()
    }

    /// Buchberger's criterion: every S-pair reduces to zero.
    pub fn satisfies_criterion(&self) -> bool {
        let n = self.elements.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let s = s_pair(&self.elements[i], &self.elements[j], &self.order);
                reduce(&s, &self.elements, &self.order).0.is_zero()
            })
        })
    }

    /// Generators as monomials, when every element is a single term.
    pub fn as_monomials(&self) -> Option<Vec<Monomial>> {
        self.elements.iter().map(|p| if p.is_monomial() { p.leading_monomial().cloned() } else { None }).collect()
    }
}

/// Multivariate division of `p` by `basis`.
///
/// Returns the remainder and one quotient per basis element, so that
/// `p = Σ quotients[i]·basis[i] + remainder` and no monomial of the
/// remainder is divisible by a leading monomial of the basis.
pub fn reduce<F: Coefficient>(
    p: &Polynomial<F>,
    basis: &[Polynomial<F>],
    ord: &TermOrder,
) -> (Polynomial<F>, Vec<Polynomial<F>>) {
    let mut quotients: Vec<Vec<(F, Monomial)>> = vec![Vec::new(); basis.len()];
    let mut remainder: Vec<(F, Monomial)> = Vec::new();
    let mut rest = p.clone();
    while let Some(lead) = rest.leading_term().cloned() {
        let divisor = basis.iter().enumerate().find_map(|(i, b)| {
            let bl = b.leading_term()?;
            lead.monomial.div(&bl.monomial).map(|q| (i, q, lead.coefficient.clone() / bl.coefficient.clone()))
        });
        match divisor {
            Some((i, m, c)) => {
                rest = rest.sub_scaled(&c, &m, &basis[i], ord);
                quotients[i].push((c, m));
            }
            None => {
                remainder.push((lead.coefficient.clone(), lead.monomial.clone()));
                rest = rest.sub(&Polynomial::monomial(lead.coefficient, lead.monomial), ord);
            }
        }
    }
    (
        Polynomial::from_terms(remainder, ord),
        quotients.into_iter().map(|q| Polynomial::from_terms(q, ord)).collect(),
    )
}

/// `S(f, g) = c_g·(in(g)/d)·f − c_f·(in(f)/d)·g` with `d = gcd(in(f), in(g))`.
pub fn s_pair<F: Coefficient>(f: &Polynomial<F>, g: &Polynomial<F>, ord: &TermOrder) -> Polynomial<F> {
    let (Some(lf), Some(lg)) = (f.leading_term(), g.leading_term()) else {
        return Polynomial::zero();
    };
    let d = lf.monomial.gcd(&lg.monomial);
    let mf = lg.monomial.div(&d).expect("gcd divides");
    let mg = lf.monomial.div(&d).expect("gcd divides");
    f.mul_monomial(&mf).scale(&lg.coefficient).sub(&g.mul_monomial(&mg).scale(&lf.coefficient), ord)
}

/// Buchberger completion without final reduction: the input generators
/// (zeros dropped) followed by every nonzero S-pair remainder, in order.
pub fn buchberger_completion<F: Coefficient>(
    gens: &[Polynomial<F>],
    ord: &TermOrder,
    bound: usize,
) -> Result<Vec<Polynomial<F>>, AlgebraError> {
    let mut basis: Vec<Polynomial<F>> = gens.iter().filter(|p| !p.is_zero()).map(|p| p.reorder(ord)).collect();
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    for j in 0..basis.len() {
        for i in 0..j {
            queue.push_back((i, j));
        }
    }
    let mut processed = 0usize;
    while let Some((i, j)) = queue.pop_front() {
        let (li, lj) = (basis[i].leading_monomial().unwrap(), basis[j].leading_monomial().unwrap());
        if li.is_coprime(lj) {
            continue;
        }
        processed += 1;
        if processed > bound {
            return Err(AlgebraError::IterationBound(bound));
        }
        let s = s_pair(&basis[i], &basis[j], ord);
        let (r, _) = reduce(&s, &basis, ord);
        if !r.is_zero() {
            let k = basis.len();
            basis.push(r.monic());
            for i in 0..k {
                queue.push_back((i, k));
            }
        }
    }
    Ok(basis)
}

/// Reduced Gröbner basis: monic, sorted by descending leading monomial, and
/// no term of any element divisible by another element's leading monomial.
pub fn buchberger<F: Coefficient>(gens: &[Polynomial<F>], ord: &TermOrder) -> Result<GroebnerBasis<F>, AlgebraError> {
    buchberger_bounded(gens, ord, DEFAULT_PAIR_BOUND)
}

pub fn buchberger_bounded<F: Coefficient>(
    gens: &[Polynomial<F>],
    ord: &TermOrder,
    bound: usize,
) -> Result<GroebnerBasis<F>, AlgebraError> {
    let completed = buchberger_completion(gens, ord, bound)?;
    Ok(GroebnerBasis { elements: interreduce(completed, ord), order: ord.clone() })
}

fn interreduce<F: Coefficient>(mut basis: Vec<Polynomial<F>>, ord: &TermOrder) -> Vec<Polynomial<F>> {
    basis.sort_by(|a, b| ord.compare(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    // Minimal basis: drop elements whose leading monomial is divisible by another's.
    let mut minimal: Vec<Polynomial<F>> = Vec::new();
    for p in basis {
        let lm = p.leading_monomial().unwrap();
        if minimal.iter().any(|q| q.leading_monomial().unwrap().divides(lm)) {
            continue;
        }
        minimal.retain(|q| !lm.divides(q.leading_monomial().unwrap()));
        minimal.push(p);
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial<F>> =
            minimal.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, q)| q.clone()).collect();
        let lead = minimal[i].leading_term().unwrap().clone();
        let tail = minimal[i].sub(&Polynomial::monomial(lead.coefficient.clone(), lead.monomial.clone()), ord);
        let (r, _) = reduce(&tail, &others, ord);
        reduced.push(r.add(&Polynomial::monomial(lead.coefficient, lead.monomial), ord).monic());
    }
    reduced.sort_by(|a, b| ord.compare(b.leading_monomial().unwrap(), a.leading_monomial().unwrap()));
    reduced
}

/// Ideal membership through the normal form.
pub fn ideal_member<F: Coefficient>(p: &Polynomial<F>, basis: &GroebnerBasis<F>) -> bool {
    reduce(&p.reorder(&basis.order), &basis.elements, &basis.order).0.is_zero()
}

/// Gröbner basis of `J1 ∩ J2` by eliminating an auxiliary variable `t`
/// from `⟨t·g_i, (1 − t)·h_j⟩` under a block order with `t` on top.
pub fn ideal_intersect_elim<F: Coefficient>(
    j1: &[Polynomial<F>],
    j2: &[Polynomial<F>],
    ord: &GrevlexOrder,
) -> Result<GroebnerBasis<F>, AlgebraError> {
    let top = j1
        .iter()
        .chain(j2)
        .flat_map(|p| p.variables())
        .chain(ord.ranking().iter().copied())
        .map(|v| v.0 + 1)
        .max()
        .unwrap_or(0);
    let t = VariableId(top);
    let block = TermOrder::Block { eliminate: vec![t], rest: ord.clone() };
    let tp = Polynomial::var(t);
    let one_minus_t = Polynomial::constant(F::one()).sub(&tp, &block);
    let gens: Vec<Polynomial<F>> = j1
        .iter()
        .map(|g| tp.mul(g, &block))
        .chain(j2.iter().map(|h| one_minus_t.mul(h, &block)))
        .collect();
    let gb = buchberger(&gens, &block)?;
    let base = TermOrder::Grevlex(ord.clone());
    let elements = gb
        .elements
        .into_iter()
        .filter(|p| p.leading_monomial().is_some_and(|m| m.exponent(t) == 0))
        .map(|p| p.reorder(&base))
        .collect();
    Ok(GroebnerBasis { elements, order: base })
}
