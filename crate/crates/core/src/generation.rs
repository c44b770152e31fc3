//! Answer generation from row-1/2 patterns, and panel similarity.

use std::collections::BTreeSet;

use num_rational::Rational64;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::concept::{minimalize, Concept};
use crate::domain::{com_pos, decode_panel, f_next, f_next_iter, split_views, ConceptMatrix, PanelEntity, ViewTag};
use crate::error::{EncodeError, ReasoningError};
use crate::invariance::{fold_ops, inside_attr, patterns_of_row, pd_set, readout, BinOp, ExtractionConfig, Pattern, RowDecomposition};
use crate::monomial::{Monomial, VariableId};
use crate::schema::{AttrKind, Place, Schema};

fn row3_check(row3: &[Concept]) -> Option<(&Concept, &Concept)> {
    match row3 {
        [a, b, ..] => Some((a, b)),
        _ => None,
    }
}

/// Shared component of the row-3 pair inside `attr` with `arity` generators; `⟨0⟩` on conflict.
pub fn inv_intra(attr: AttrKind, arity: usize, row3: &[Concept], schema: &Schema) -> Concept {
    if row3_check(row3).is_none() {
        return Concept::zero();
    }
    let rd = RowDecomposition::new(&row3[..2]);
    let found = rd.shared().find(|i| i.len() == arity && inside_attr(i, attr, schema)).cloned();
    found.unwrap_or_else(Concept::zero)
}

/// Sum of the payload components not yet seen in row 3; `⟨0⟩` if none remain or
/// row 3 shows none of them.
pub fn inv_inter(attr: AttrKind, components: &[Concept], row3: &[Concept], schema: &Schema) -> Concept {
    if row3_check(row3).is_none() {
        return Concept::zero();
    }
    let seen: BTreeSet<Concept> = RowDecomposition::new(&row3[..2]).novel_in(attr, schema).into_iter().collect();
    let (hit, rest): (Vec<&Concept>, Vec<&Concept>) = components.iter().partition(|c| seen.contains(*c));
    if hit.is_empty() || rest.is_empty() {
        return Concept::zero();
    }
    Concept::sum_all(rest)
}

/// Component of `pd(f_next²(J_31)) ∩ pd(f_next(J_32))` inside `attr`, else `⟨0⟩`.
pub fn inv_comp(attr: AttrKind, delta: i64, row3: &[Concept], schema: &Schema) -> Concept {
    let Some((a, b)) = row3_check(row3) else {
        return Concept::zero();
    };
    let first = pd_set(&f_next_iter(a, delta, 2, schema));
    let second = pd_set(&f_next(b, delta, schema));
    first
        .intersection(&second)
        .find(|i| inside_attr(i, attr, schema))
        .cloned()
        .unwrap_or_else(Concept::zero)
}

/// `⟨x⟩` for the value indexed by `g(J_31) op g(J_32)`, else `⟨0⟩`.
pub fn inv_binary(attr: AttrKind, ops: &[BinOp], row3: &[Concept], schema: &Schema) -> Concept {
    let Some((a, b)) = row3_check(row3) else {
        return Concept::zero();
    };
    let (Some(x), Some(y)) = (readout(a, attr, schema), readout(b, attr, schema)) else {
        return Concept::zero();
    };
    let Some(t) = fold_ops(&[x, y], ops).and_then(|t| usize::try_from(t).ok()) else {
        return Concept::zero();
    };
    let var = match attr {
        AttrKind::Num => schema.num_var(t),
        _ => {
            // Same sub-sequence as the first cell's value.
            let v = a.mingen().first().and_then(|g| g.support().find(|&v| schema.kind(v) == attr));
            v.and_then(|v| match schema.place(v) {
                Place::Cycle { cycle, .. } => schema.attribute(attr).cycles[cycle].get(t).copied(),
                _ => None,
            })
        }
    };
    var.map(|v| Concept::principal(Monomial::var(v))).unwrap_or_else(Concept::zero)
}

/// Inverse module for one pattern on row-3 cells.
pub fn invert(pattern: &Pattern, row3: &[Concept], schema: &Schema) -> Concept {
    match pattern {
        Pattern::Intra { attr, arity } => inv_intra(*attr, *arity, row3, schema),
        Pattern::Inter { attr, components } => inv_inter(*attr, components, row3, schema),
        Pattern::Comp { attr, delta } => inv_comp(*attr, *delta, row3, schema),
        Pattern::Binary { attr, ops } => inv_binary(*attr, ops, row3, schema),
    }
}

/// A random draw made while generating.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RandomChoice {
    /// One generator out of several surviving candidates at a position.
    Generator { position: VariableId, chosen: Monomial, candidates: Vec<Monomial> },
    /// A value for an attribute left open or over-determined.
    Value { position: VariableId, attr: AttrKind, chosen: VariableId, candidates: Vec<VariableId> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedAnswer {
    pub concept: Concept,
    pub random_choices: Vec<RandomChoice>,
    pub seed: u64,
}

fn row_patterns(view: &ConceptMatrix, schema: &Schema, config: &ExtractionConfig) -> BTreeSet<Pattern> {
    let p1 = patterns_of_row(view.row(0), schema, config);
    let p2 = patterns_of_row(view.row(1), schema, config);
    p1.intersection(&p2).cloned().collect()
}

/// Builds a ninth panel for an eight-cell question matrix.
pub fn generate_answer(
    m: &ConceptMatrix,
    schema: &Schema,
    config: &ExtractionConfig,
    seed: u64,
) -> Result<GeneratedAnswer, ReasoningError> {
    if m.cells.len() < 8 {
        return Err(ReasoningError::WrongCount { what: "question panels", expected: 8, found: m.cells.len() });
    }
    let question = ConceptMatrix::new(m.cells[..8].to_vec());
    let positions = com_pos(&question, schema);
    if positions.is_empty() {
        return Err(ReasoningError::NoCommonPosition);
    }
    let num = schema.num_var(positions.len()).ok_or(ReasoningError::WrongCount {
        what: "number values",
        expected: positions.len(),
        found: schema.attribute(AttrKind::Num).vars.len(),
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut choices = Vec::new();
    let mut picks = Vec::with_capacity(positions.len());

    let views = split_views(&question, schema);
    for &p in &positions {
        let view = views.iter().find(|v| v.view == ViewTag::Bar(p)).expect("every common position has a bar view");
        let mut ideal = Concept::principal(Monomial::from_vars([num, p]));
        for pattern in row_patterns(view, schema, config) {
            if matches!(pattern.attr(), AttrKind::Num | AttrKind::Pos) {
                continue;
            }
            let r = invert(&pattern, view.row(2), schema);
            if !r.is_zero() {
                ideal = ideal.intersect(&r);
            }
        }
        let candidates = ideal.mingen().to_vec();
        let mut g = candidates.choose(&mut rng).expect("initializer is nonzero").clone();
        if candidates.len() > 1 {
            choices.push(RandomChoice::Generator { position: p, chosen: g.clone(), candidates: candidates.clone() });
        }
        for attr in [AttrKind::Type, AttrKind::Color, AttrKind::Size] {
            let present: Vec<VariableId> = g.support().filter(|&v| schema.kind(v) == attr).collect();
            if present.len() == 1 {
                continue;
            }
            let options = if present.is_empty() { schema.attribute(attr).vars.clone() } else { present.clone() };
            let Some(&chosen) = options.choose(&mut rng) else { continue };
            choices.push(RandomChoice::Value { position: p, attr, chosen, candidates: options });
            let kept = g.factors().iter().copied().filter(|&(v, _)| schema.kind(v) != attr);
            g = Monomial::from_pairs(kept.chain([(chosen, 1)]));
        }
        picks.push(g);
    }
    Ok(GeneratedAnswer { concept: minimalize(picks), random_choices: choices, seed })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimilarityReport {
    /// Entities of both panels at the same position.
    pub s1_pairs: Vec<(PanelEntity, PanelEntity)>,
    /// Entities only in the first panel.
    pub s2_only: Vec<PanelEntity>,
    /// Entities only in the second panel.
    pub s3_only: Vec<PanelEntity>,
    pub phi: Rational64,
}

fn entities(j: &Concept, schema: &Schema) -> Result<Vec<PanelEntity>, ReasoningError> {
    let es = decode_panel(j, schema)?;
    let mut seen = BTreeSet::new();
    for e in &es {
        if !seen.insert(e.pos) {
            return Err(EncodeError::DuplicatePosition(schema.label(e.pos).to_string()).into());
        }
    }
    Ok(es)
}

/// Share of matching attribute variables over position-paired entities.
pub fn entity_score(a: &PanelEntity, b: &PanelEntity) -> Rational64 {
    let same = AttrKind::ENTITY.iter().filter(|&&k| a.get(k) == b.get(k)).count();
    Rational64::new(same as i64, AttrKind::ENTITY.len() as i64)
}

/// Pairs entities by position and averages their scores over all entities.
/// Two empty panels are identical.
pub fn similarity(j: &Concept, other: &Concept, schema: &Schema) -> Result<SimilarityReport, ReasoningError> {
    let left = entities(j, schema)?;
    let right = entities(other, schema)?;
    let mut s1 = Vec::new();
    let mut s2 = Vec::new();
    for e in &left {
        match right.iter().find(|f| f.pos == e.pos) {
            Some(f) => s1.push((*e, *f)),
            None => s2.push(*e),
        }
    }
    let s3: Vec<PanelEntity> = right.iter().filter(|f| !left.iter().any(|e| e.pos == f.pos)).copied().collect();
    let total = s1.len() + s2.len() + s3.len();
    let phi = if total == 0 {
        Rational64::from_integer(1)
    } else {
        s1.iter().map(|(a, b)| entity_score(a, b)).sum::<Rational64>() / Rational64::from_integer(total as i64)
    };
    Ok(SimilarityReport { s1_pairs: s1, s2_only: s2, s3_only: s3, phi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::encode_panel;

    fn s() -> Schema {
        Schema::running_example()
    }

    fn panel(schema: &Schema, ents: &[[&str; 4]]) -> Concept {
        let es: Vec<PanelEntity> =
            ents.iter().map(|[p, t, c, z]| PanelEntity::from_labels(schema, p, t, c, z).unwrap()).collect();
        encode_panel(&es, schema).unwrap()
    }

    fn running_matrix(schema: &Schema) -> ConceptMatrix {
        let cells = [
            [["left", "square", "black", "avg"], ["right", "triangle", "gray", "avg"]],
            [["left", "pentagon", "gray", "avg"], ["right", "square", "gray", "avg"]],
            [["left", "circle", "white", "avg"], ["right", "pentagon", "gray", "avg"]],
            [["left", "pentagon", "white", "small"], ["right", "pentagon", "dgray", "small"]],
            [["left", "circle", "black", "small"], ["right", "hexagon", "dgray", "small"]],
            [["left", "square", "gray", "small"], ["right", "circle", "dgray", "small"]],
            [["left", "circle", "gray", "avg"], ["right", "pentagon", "gray", "large"]],
            [["left", "square", "white", "avg"], ["right", "hexagon", "gray", "large"]],
        ];
        ConceptMatrix::new(cells.iter().map(|c| panel(schema, c)).collect())
    }

    fn bar(schema: &Schema, pos: &str) -> ConceptMatrix {
        let m = running_matrix(schema);
        let p = schema.var(pos).unwrap();
        split_views(&m, schema).into_iter().find(|v| v.view == ViewTag::Bar(p)).unwrap()
    }

    fn var(schema: &Schema, l: &str) -> Concept {
        Concept::principal(Monomial::var(schema.var(l).unwrap()))
    }

    #[test]
    fn intra_on_row_three() {
        let schema = s();
        let m = running_matrix(&schema);
        let row3 = m.row(2);
        assert!(inv_intra(AttrKind::Size, 1, row3, &schema).is_zero());
        assert_eq!(inv_intra(AttrKind::Num, 1, row3, &schema), var(&schema, "two"));
        let same = vec![row3[0].clone(), row3[0].clone()];
        assert_eq!(inv_intra(AttrKind::Color, 1, &same, &schema), var(&schema, "gray"));
    }

    #[test]
    fn inter_on_left_view() {
        let schema = s();
        let left = bar(&schema, "left");
        let payload = vec![var(&schema, "square"), var(&schema, "pentagon"), var(&schema, "circle")];
        assert_eq!(inv_inter(AttrKind::Type, &payload, left.row(2), &schema), var(&schema, "pentagon"));
        let seen = vec![var(&schema, "square"), var(&schema, "circle")];
        assert!(inv_inter(AttrKind::Type, &seen, left.row(2), &schema).is_zero());
        let other = vec![var(&schema, "triangle"), var(&schema, "hexagon"), var(&schema, "pentagon")];
        assert!(inv_inter(AttrKind::Type, &other, left.row(2), &schema).is_zero());
    }

    #[test]
    fn comp_on_right_view() {
        let schema = s();
        let right = bar(&schema, "right");
        assert_eq!(inv_comp(AttrKind::Type, 1, right.row(2), &schema), var(&schema, "circle"));
        let row = right.row(2);
        let bumped = vec![row[0].clone(), f_next(&row[1], 1, &schema)];
        assert!(inv_comp(AttrKind::Type, 1, &bumped, &schema).is_zero());
        // a full turn of the size cycle fixes a constant size
        let same = vec![row[0].clone(), row[0].clone()];
        assert_eq!(inv_comp(AttrKind::Size, 3, &same, &schema), var(&schema, "large"));
    }

    #[test]
    fn binary_readouts() {
        let schema = Schema::iraven_full();
        let cell = |n: &[&str], col: &str| {
            let num = schema.num_var(n.len()).unwrap();
            minimalize(n.iter().map(|p| {
                Monomial::from_vars([num, schema.var(p).unwrap(), schema.var("square").unwrap(), schema.var(col).unwrap(), schema.var("(0.4,0.5)").unwrap()])
            }))
        };
        let one = cell(&["(0.25,0.25,0.5)"], "#0");
        let two = cell(&["(0.25,0.25,0.5)", "(0.25,0.75,0.5)"], "#0");
        assert_eq!(inv_binary(AttrKind::Num, &[BinOp::Add], &[one, two], &schema), var(&schema, "three"));
        let five: Vec<&str> = schema.attribute(AttrKind::Pos).vars.iter().take(5).map(|&v| schema.label(v)).collect();
        let c5 = cell(&five, "#0");
        assert!(inv_binary(AttrKind::Num, &[BinOp::Add], &[c5.clone(), c5], &schema).is_zero());
        let a = cell(&["(0.5,0.5,1.0)"], "#112");
        let b = cell(&["(0.5,0.5,1.0)"], "#168");
        assert_eq!(inv_binary(AttrKind::Color, &[BinOp::Sub], &[a, b], &schema), var(&schema, "#196"));
    }

    #[test]
    fn running_example_answer() {
        let schema = s();
        let m = running_matrix(&schema);
        let expected = panel(&schema, &[["left", "pentagon", "black", "avg"], ["right", "circle", "gray", "large"]]);
        for seed in [0, 1, 99] {
            let g = generate_answer(&m, &schema, &ExtractionConfig::default(), seed).unwrap();
            assert_eq!(g.concept, expected);
            assert!(g.random_choices.is_empty());
        }
    }

    #[test]
    fn missing_patterns_fall_back_to_random_values() {
        let schema = s();
        let m = running_matrix(&schema);
        let config = ExtractionConfig::default().only(&[]);
        let g = generate_answer(&m, &schema, &config, 5).unwrap();
        assert_eq!(g.concept.len(), 2);
        assert_eq!(g.random_choices.len(), 6);
        assert!(decode_panel(&g.concept, &schema).is_ok());
        assert_eq!(generate_answer(&m, &schema, &config, 5).unwrap(), g);
    }

    #[test]
    fn empty_com_pos_is_an_error() {
        let schema = s();
        let mut m = running_matrix(&schema);
        m.cells[0] = panel(&schema, &[["left", "square", "black", "avg"]]);
        m.cells[4] = panel(&schema, &[["right", "square", "black", "avg"]]);
        assert!(matches!(generate_answer(&m, &schema, &ExtractionConfig::default(), 0), Err(ReasoningError::NoCommonPosition)));
    }

    #[test]
    fn similarity_examples() {
        let schema = s();
        let j = panel(&schema, &[["left", "square", "black", "avg"]]);
        assert_eq!(similarity(&j, &j, &schema).unwrap().phi, Rational64::from_integer(1));
        let far = panel(&schema, &[["right", "square", "black", "avg"]]);
        assert_eq!(similarity(&j, &far, &schema).unwrap().phi, Rational64::from_integer(0));
        let two = panel(&schema, &[["left", "square", "white", "small"], ["right", "circle", "gray", "avg"]]);
        let r = similarity(&j, &two, &schema).unwrap();
        assert_eq!((r.s1_pairs.len(), r.s2_only.len(), r.s3_only.len()), (1, 0, 1));
        assert_eq!(r.phi, Rational64::new(1, 4));
    }
}
