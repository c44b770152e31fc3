//! Monomial orders for polynomial arithmetic.

use std::cmp::Ordering;

use crate::monomial::{grevlex_cmp, Monomial, VariableId};

/// Graded reverse-lexicographic order under a variable ranking.
///
/// `ranking[0]` is the largest variable. Variables missing from the ranking
/// rank below every listed one, ordered by index. An empty ranking is the
/// default `x_0 > x_1 > ...`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GrevlexOrder {
    ranking: Vec<VariableId>,
    slot: Vec<Option<u32>>,
}

impl GrevlexOrder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Order with `ranking[0] > ranking[1] > ...`.
    ///
    /// Panics if a variable is listed twice.
    pub fn with_ranking(ranking: Vec<VariableId>) -> Self {
        let size = ranking.iter().map(|v| v.index() + 1).max().unwrap_or(0);
        let mut slot = vec![None; size];
        for (r, v) in ranking.iter().enumerate() {
            assert!(slot[v.index()].is_none(), "variable {v:?} ranked twice");
            slot[v.index()] = Some(r as u32);
        }
        GrevlexOrder { ranking, slot }
    }

    pub fn ranking(&self) -> &[VariableId] {
        &self.ranking
    }

    fn relabel(&self, m: &Monomial) -> Monomial {
        let n = self.ranking.len() as u32;
        Monomial::from_pairs(m.factors().iter().map(|&(v, e)| {
            let r = match self.slot.get(v.index()).copied().flatten() {
                Some(r) => r,
                None => n + v.0,
            };
            (VariableId(r), e)
        }))
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        if self.ranking.is_empty() {
            grevlex_cmp(a, b)
        } else {
            grevlex_cmp(&self.relabel(a), &self.relabel(b))
        }
    }
}

/// Order used by Buchberger's algorithm and reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermOrder {
    Grevlex(GrevlexOrder),
    /// Block order: compare the total degree in `eliminate` first, then break
    /// ties with `rest` on the full monomials. Every monomial divisible by an
    /// eliminated variable is larger than every monomial free of them.
    Block { eliminate: Vec<VariableId>, rest: GrevlexOrder },
}

impl Default for TermOrder {
    fn default() -> Self {
        TermOrder::Grevlex(GrevlexOrder::default())
    }
}

impl From<GrevlexOrder> for TermOrder {
    fn from(o: GrevlexOrder) -> Self {
        TermOrder::Grevlex(o)
    }
}

impl TermOrder {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            TermOrder::Grevlex(o) => o.compare(a, b),
            TermOrder::Block { eliminate, rest } => {
                let da: u32 = eliminate.iter().map(|&t| a.exponent(t)).sum();
                let db: u32 = eliminate.iter().map(|&t| b.exponent(t)).sum();
                da.cmp(&db).then_with(|| rest.compare(a, b))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranking_reverses_default() {
        let x = Monomial::var(VariableId(0));
        let y = Monomial::var(VariableId(1));
        assert_eq!(GrevlexOrder::new().compare(&x, &y), Ordering::Greater);
        let rev = GrevlexOrder::with_ranking(vec![VariableId(1), VariableId(0)]);
        assert_eq!(rev.compare(&x, &y), Ordering::Less);
    }

    #[test]
    fn block_order_puts_t_first() {
        let t = VariableId(9);
        let ord = TermOrder::Block { eliminate: vec![t], rest: GrevlexOrder::new() };
        let big = Monomial::from_exponents(&[5, 5]);
        assert_eq!(ord.compare(&Monomial::var(t), &big), Ordering::Greater);
    }
}
