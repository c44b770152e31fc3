use std::cmp::Ordering;

use ideal_rpm::groebner::{buchberger, ideal_intersect_elim, ideal_member, GrevlexOrder, Polynomial, TermOrder};
use ideal_rpm::monomial::grevlex_cmp;
use ideal_rpm::{minimalize, primary_decompose, primary_decompose_by_splitting, Concept, Monomial, PivotRule, VariableId};
use num_rational::BigRational;
use proptest::prelude::*;

fn monomial(nvars: u32, max_exp: u32) -> impl Strategy<Value = Monomial> {
    prop::collection::vec((0..nvars, 1..=max_exp), 0..4)
        .prop_map(|pairs| Monomial::from_pairs(pairs.into_iter().map(|(v, e)| (VariableId(v), e))))
}

fn squarefree_concept(nvars: u32) -> impl Strategy<Value = Concept> {
    prop::collection::vec(prop::collection::btree_set(0..nvars, 1..4), 1..=6)
        .prop_map(|gens| minimalize(gens.into_iter().map(|s| Monomial::from_vars(s.into_iter().map(VariableId)))))
}

fn concept(nvars: u32) -> impl Strategy<Value = Concept> {
    prop::collection::vec(monomial(nvars, 3), 1..=5)
        .prop_map(|gens| minimalize(gens.into_iter().filter(|m| !m.is_one())))
        .prop_filter("proper nonzero", |c| !c.is_zero() && !c.is_unit())
}

fn all_squarefree(n: u32) -> impl Iterator<Item = Monomial> {
    (0u32..1 << n).map(move |mask| Monomial::from_vars((0..n).filter(|i| mask >> i & 1 == 1).map(VariableId)))
}

fn is_minimal(c: &Concept) -> bool {
    let g = c.mingen();
    g.iter().enumerate().all(|(i, a)| g.iter().enumerate().all(|(j, b)| i == j || !a.divides(b)))
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn polynomial(nvars: u32) -> impl Strategy<Value = Polynomial<BigRational>> {
    prop::collection::vec((-3i64..=3, monomial(nvars, 2)), 1..=3).prop_map(|terms| {
        Polynomial::from_terms(terms.into_iter().map(|(c, m)| (q(c), m)), &TermOrder::default())
    })
}

proptest! {
    #[test]
    fn pd_reconstructs_squarefree(j in squarefree_concept(10)) {
        let pd = primary_decompose(&j).unwrap();
        prop_assert_eq!(pd.reconstruct(), j);
        prop_assert!(pd.components().iter().all(Concept::is_simple));
        let mut seen = pd.components().to_vec();
        seen.dedup();
        prop_assert_eq!(seen.len(), pd.len());
    }

    #[test]
    fn pd_reconstructs_general(j in concept(5)) {
        let pd = primary_decompose(&j).unwrap();
        prop_assert_eq!(pd.reconstruct(), j);
    }

    #[test]
    fn pd_independent_of_pivot(j in concept(6), seed in any::<u64>()) {
        let base = primary_decompose(&j).unwrap();
        for rule in [PivotRule::GrevlexSmallest, PivotRule::Seeded(seed)] {
            let other = primary_decompose_by_splitting(&j, rule).unwrap();
            prop_assert_eq!(other.components(), base.components());
        }
    }

    #[test]
    fn operations_match_membership(a in squarefree_concept(7), b in squarefree_concept(7)) {
        let (sum, prod, cap) = (a.sum(&b), a.product(&b), a.intersect(&b));
        for c in [&sum, &prod, &cap] {
            prop_assert!(is_minimal(c));
        }
        prop_assert!(cap.contains(&prod));
        for m in all_squarefree(7) {
            prop_assert_eq!(cap.member(&m), a.member(&m) && b.member(&m));
            prop_assert_eq!(sum.member(&m), a.member(&m) || b.member(&m));
        }
    }

    #[test]
    fn product_inside_intersection_general(a in concept(5), b in concept(5)) {
        prop_assert!(a.intersect(&b).contains(&a.product(&b)));
    }

    #[test]
    fn containment_agrees_with_divisibility(a in squarefree_concept(6), j in squarefree_concept(6)) {
        let brute = j.mingen().iter().all(|g| a.mingen().iter().any(|h| h.divides(g)));
        prop_assert_eq!(a.contains(&j), brute);
    }

    #[test]
    fn grevlex_axioms(a in monomial(5, 3), b in monomial(5, 3), m in monomial(5, 3)) {
        prop_assert_eq!(grevlex_cmp(&a, &b), grevlex_cmp(&b, &a).reverse());
        prop_assert_eq!(grevlex_cmp(&a, &b) == Ordering::Equal, a == b);
        prop_assert_ne!(grevlex_cmp(&a, &Monomial::one()), Ordering::Less);
        if grevlex_cmp(&a, &b) == Ordering::Greater {
            prop_assert_eq!(grevlex_cmp(&a.mul(&m), &b.mul(&m)), Ordering::Greater);
        }
        if !m.is_one() {
            prop_assert_eq!(grevlex_cmp(&m.mul(&b), &b), Ordering::Greater);
        }
        let ord = GrevlexOrder::new();
        prop_assert_eq!(ord.compare(&a, &b), grevlex_cmp(&a, &b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn buchberger_criterion_and_membership(
        gens in prop::collection::vec(polynomial(3), 1..=3),
        mult in prop::collection::vec(polynomial(3), 3),
    ) {
        let ord = TermOrder::default();
        let gens: Vec<_> = gens.into_iter().filter(|p| !p.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let gb = buchberger(&gens, &ord).unwrap();
        prop_assert!(gb.satisfies_criterion());
        let combo = gens.iter().zip(&mult).fold(Polynomial::zero(), |acc, (g, f)| acc.add(&g.mul(f, &ord), &ord));
        prop_assert!(ideal_member(&combo, &gb));
    }

    #[test]
    fn one_outside_proper_monomial_ideals(j in concept(4)) {
        let ord = TermOrder::default();
        let gens: Vec<Polynomial<BigRational>> = j.mingen().iter().map(|m| Polynomial::monomial(q(1), m.clone())).collect();
        let gb = buchberger(&gens, &ord).unwrap();
        prop_assert!(!ideal_member(&Polynomial::constant(q(1)), &gb));
    }

    #[test]
    fn elimination_matches_lcm_intersection(a in concept(4), b in concept(4)) {
        let polys = |c: &Concept| -> Vec<Polynomial<BigRational>> {
            c.mingen().iter().map(|m| Polynomial::monomial(q(1), m.clone())).collect()
        };
        let gb = ideal_intersect_elim(&polys(&a), &polys(&b), &GrevlexOrder::new()).unwrap();
        prop_assert_eq!(minimalize(gb.as_monomials().unwrap()), a.intersect(&b));
    }
}
