//! Unique minimal primary decomposition of monomial ideals.
//!
//! Two routes are provided. The general route splits a reducible generator
//! `m = m'·m''` (coprime parts) into `⟨Ĝ, m'⟩ ∩ ⟨Ĝ, m''⟩` until every
//! generator is a pure power, then merges leaves by radical and removes
//! redundant components. Squarefree ideals take a faster route: their
//! components are the simple ideals of the minimal transversals of the
//! generator supports, built incrementally one generator at a time.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::concept::{minimalize, Concept};
use crate::error::AlgebraError;
use crate::monomial::{Monomial, VariableId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimaryDecomposition {
    source: Concept,
    components: Vec<Concept>,
}

impl PrimaryDecomposition {
    pub fn source(&self) -> &Concept {
        &self.source
    }

    /// Components in canonical (ascending) order.
    pub fn components(&self) -> &[Concept] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Concept> {
        self.components
    }

    pub fn contains_component(&self, c: &Concept) -> bool {
        self.components.binary_search(c).is_ok()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Intersection of all components; equals the source ideal.
    pub fn reconstruct(&self) -> Concept {
        Concept::intersect_all(&self.components)
    }
}

/// How the splitting route picks the generator and variable to split on.
///
/// The final decomposition does not depend on this choice; the alternatives
/// exist so that independence can be exercised.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PivotRule {
    /// Grevlex-largest reducible generator, split off its highest-ranked variable.
    #[default]
    GrevlexLargest,
    /// Grevlex-smallest reducible generator, split off its lowest-ranked variable.
    GrevlexSmallest,
    /// Pseudo-random generator and variable, driven by the seed.
    Seeded(u64),
}

/// Unique minimal primary decomposition with maximal monomial primary components.
pub fn primary_decompose(j: &Concept) -> Result<PrimaryDecomposition, AlgebraError> {
    check_proper(j)?;
    if j.is_basic() {
        let components = minimal_transversals(j).into_iter().map(Concept::simple).collect();
        return Ok(finish(j, components));
    }
    primary_decompose_by_splitting(j, PivotRule::default())
}

/// Primary decomposition through recursive generator splitting.
pub fn primary_decompose_by_splitting(j: &Concept, rule: PivotRule) -> Result<PrimaryDecomposition, AlgebraError> {
    check_proper(j)?;
    let mut splitter = Splitter { rule, memo: HashMap::new(), counter: 0 };
    let mut leaves = splitter.leaves(j);
    leaves.sort();
    leaves.dedup();

    // An irreducible leaf that contains another leaf is redundant.
    let minimal: Vec<Concept> = leaves
        .iter()
        .filter(|l| !leaves.iter().any(|o| o != *l && l.contains(o)))
        .cloned()
        .collect();

    let mut by_radical: Vec<(Concept, Concept)> = Vec::new();
    for leaf in minimal {
        let rad = leaf.radical();
        match by_radical.iter_mut().find(|(r, _)| *r == rad) {
            Some((_, acc)) => *acc = acc.intersect(&leaf),
            None => by_radical.push((rad, leaf)),
        }
    }
    let mut components: Vec<Concept> = by_radical.into_iter().map(|(_, c)| c).collect();
    components.sort();

    // Drop components containing the intersection of the others.
    let mut i = 0;
    while i < components.len() && components.len() > 1 {
        let rest = Concept::intersect_all(components.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, c)| c));
        if components[i].contains(&rest) {
            components.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(finish(j, components))
}

fn check_proper(j: &Concept) -> Result<(), AlgebraError> {
    if j.is_zero() {
        Err(AlgebraError::ZeroIdeal)
    } else if j.is_unit() {
        Err(AlgebraError::UnitIdeal)
    } else {
        Ok(())
    }
}

fn finish(j: &Concept, mut components: Vec<Concept>) -> PrimaryDecomposition {
    components.sort();
    components.dedup();
    PrimaryDecomposition { source: j.clone(), components }
}

struct Splitter {
    rule: PivotRule,
    memo: HashMap<Concept, Vec<Concept>>,
    counter: u64,
}

impl Splitter {
    fn leaves(&mut self, j: &Concept) -> Vec<Concept> {
        if let Some(hit) = self.memo.get(j) {
            return hit.clone();
        }
        let reducible: Vec<usize> =
            (0..j.len()).filter(|&i| j.mingen()[i].pure_power_var().is_none() && !j.mingen()[i].is_one()).collect();
        let out = if reducible.is_empty() {
            vec![j.clone()]
        } else {
            let (gi, var) = self.pick(j, &reducible);
            let m = &j.mingen()[gi];
            let head = Monomial::var_pow(var, m.exponent(var));
            let tail = m.div(&head).expect("pure power of a support variable divides");
            let rest = || j.mingen().iter().enumerate().filter(move |&(k, _)| k != gi).map(|(_, g)| g.clone());
            let left = minimalize(rest().chain(std::iter::once(head)));
            let right = minimalize(rest().chain(std::iter::once(tail)));
            let mut out = self.leaves(&left);
            out.extend(self.leaves(&right));
            out
        };
        self.memo.insert(j.clone(), out.clone());
        out
    }

    fn pick(&mut self, j: &Concept, reducible: &[usize]) -> (usize, VariableId) {
        let support_of = |gi: usize| j.mingen()[gi].support().collect::<Vec<_>>();
        match self.rule {
            // mingen is stored grevlex-descending; lower variable index ranks higher.
            PivotRule::GrevlexLargest => {
                let gi = reducible[0];
                (gi, support_of(gi)[0])
            }
            PivotRule::GrevlexSmallest => {
                let gi = *reducible.last().unwrap();
                (gi, *support_of(gi).last().unwrap())
            }
            PivotRule::Seeded(seed) => {
                self.counter += 1;
                let h = splitmix(seed ^ self.counter.wrapping_mul(0x9E37_79B9_7F4A_7C15));
                let gi = reducible[(h % reducible.len() as u64) as usize];
                let sup = support_of(gi);
                let v = sup[((h >> 32) % sup.len() as u64) as usize];
                (gi, v)
            }
        }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Fixed-width bit set over variable indices.
#[derive(Clone, PartialEq, Eq)]
struct VarSet(Vec<u64>);

impl VarSet {
    fn empty(words: usize) -> Self {
        VarSet(vec![0; words])
    }
    fn insert(&mut self, v: VariableId) {
        self.0[v.index() / 64] |= 1 << (v.index() % 64);
    }
    fn intersects(&self, o: &VarSet) -> bool {
        self.0.iter().zip(&o.0).any(|(a, b)| a & b != 0)
    }
    fn is_subset(&self, o: &VarSet) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
    fn vars(&self) -> Vec<VariableId> {
        let mut out = Vec::new();
        for (w, &bits) in self.0.iter().enumerate() {
            let mut b = bits;
            while b != 0 {
                let t = b.trailing_zeros() as usize;
                out.push(VariableId::from(w * 64 + t));
                b &= b - 1;
            }
        }
        out
    }
}

/// Minimal transversals of the generator supports of a squarefree ideal.
fn minimal_transversals(j: &Concept) -> Vec<Vec<VariableId>> {
    let words = j.mingen().iter().filter_map(Monomial::max_var).map(|v| v.index() / 64 + 1).max().unwrap_or(1);
    let mut edges: Vec<VarSet> = j
        .mingen()
        .iter()
        .map(|g| {
            let mut s = VarSet::empty(words);
            g.support().for_each(|v| s.insert(v));
            s
        })
        .collect();
    edges.sort_by_key(|e| e.vars().len());

    let mut covers = vec![VarSet::empty(words)];
    for edge in &edges {
        let (hit, missed): (Vec<VarSet>, Vec<VarSet>) = covers.into_iter().partition(|c| c.intersects(edge));
        let mut next = hit;
        for c in missed {
            for v in edge.vars() {
                let mut grown = c.clone();
                grown.insert(v);
                // Only covers already hitting `edge` or fellow extensions can be subsets.
                if next.iter().any(|o| o.is_subset(&grown)) {
                    continue;
                }
                next.retain(|o| !(grown.is_subset(o) && o != &grown));
                next.push(grown);
            }
        }
        covers = next;
    }
    covers.into_iter().map(|c| c.vars()).collect()
}
