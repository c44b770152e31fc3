//! The four pattern extractors, row-wise aggregation over views, and answer
//! selection by counting patterns shared with the first two rows.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::concept::Concept;
use crate::decompose::primary_decompose;
use crate::domain::{f_next_iter, g_attr, g_num, split_views, ConceptMatrix, RpmInstance, ViewTag};
use crate::error::ReasoningError;
use crate::schema::{AttrKind, Schema};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BinOp {
    #[serde(rename = "+")]
    Add,
    #[serde(rename = "-")]
    Sub,
    #[serde(rename = "*")]
    Mul,
    #[serde(rename = "/")]
    Div,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    /// Integer evaluation; division must be exact.
    pub fn apply(self, a: i64, b: i64) -> Option<i64> {
        match self {
            BinOp::Add => a.checked_add(b),
            BinOp::Sub => a.checked_sub(b),
            BinOp::Mul => a.checked_mul(b),
            BinOp::Div => (b != 0 && a % b == 0).then(|| a / b),
        }
    }
}

impl fmt::Display for BinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl std::str::FromStr for BinOp {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div]
            .into_iter()
            .find(|o| o.symbol() == s)
            .ok_or_else(|| format!("unknown operator `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "module", rename_all = "lowercase")]
pub enum Pattern {
    /// A component inside the attribute concept shared by the sum and the
    /// intersection of the row; `arity` is its generator count.
    Intra { attr: AttrKind, arity: usize },
    /// Components of the intersection missing from the sum, all inside the attribute concept.
    Inter { attr: AttrKind, components: Vec<Concept> },
    /// A component invariant along the row after shifting earlier cells by `delta`.
    Comp { attr: AttrKind, delta: i64 },
    /// `g(J_1) op_1 ... g(J_{k-1}) = g(J_k)` for the readout of `attr`.
    Binary { attr: AttrKind, ops: Vec<BinOp> },
}

impl Pattern {
    pub fn attr(&self) -> AttrKind {
        match self {
            Pattern::Intra { attr, .. }
            | Pattern::Inter { attr, .. }
            | Pattern::Comp { attr, .. }
            | Pattern::Binary { attr, .. } => *attr,
        }
    }

    pub fn module(&self) -> Module {
        match self {
            Pattern::Intra { .. } => Module::Intra,
            Pattern::Inter { .. } => Module::Inter,
            Pattern::Comp { .. } => Module::Comp,
            Pattern::Binary { .. } => Module::Binary,
        }
    }

    pub fn display<'a>(&'a self, schema: &'a Schema) -> impl fmt::Display + 'a {
        PatternDisplay { p: self, schema }
    }
}

struct PatternDisplay<'a> {
    p: &'a Pattern,
    schema: &'a Schema,
}

impl fmt::Display for PatternDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.p {
            Pattern::Intra { attr, arity } => write!(f, "intra({attr}, {arity})"),
            Pattern::Inter { attr, components } => {
                let parts: Vec<String> = components.iter().map(|c| self.schema.show(c)).collect();
                write!(f, "inter({attr}, {{{}}})", parts.join(", "))
            }
            Pattern::Comp { attr, delta } => write!(f, "comp({attr}, {delta:+})"),
            Pattern::Binary { attr, ops } => {
                let ops: Vec<&str> = ops.iter().map(|o| o.symbol()).collect();
                write!(f, "binary({attr}, [{}])", ops.join(", "))
            }
        }
    }
}

/// A pattern together with the view it was found in; equality is on both.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TaggedPattern {
    pub pattern: Pattern,
    pub view: ViewTag,
}

impl TaggedPattern {
    pub fn display<'a>(&'a self, schema: &'a Schema) -> String {
        format!("{} @ {}", self.pattern.display(schema), self.view.display(schema))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Module {
    Intra,
    Inter,
    Comp,
    Binary,
}

impl Module {
    pub const ALL: [Module; 4] = [Module::Intra, Module::Inter, Module::Comp, Module::Binary];
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Module::Intra => "intra",
            Module::Inter => "inter",
            Module::Comp => "comp",
            Module::Binary => "binary",
        })
    }
}

impl std::str::FromStr for Module {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Module::ALL.into_iter().find(|m| m.to_string() == s).ok_or_else(|| format!("unknown module `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionConfig {
    /// Step sizes tried by the compositional module.
    pub deltas: Vec<i64>,
    /// Operator set for the binary module.
    pub binary_ops: Vec<BinOp>,
    /// Attributes with a numeric readout used by the binary module.
    pub binary_attrs: Vec<AttrKind>,
    pub modules: BTreeSet<Module>,
    /// Skip `Comp(attr, delta)` when the step maps every value of `attr` to itself.
    pub skip_identity_steps: bool,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        ExtractionConfig {
            deltas: vec![1, 2, -1, -2],
            binary_ops: vec![BinOp::Add, BinOp::Sub],
            binary_attrs: vec![AttrKind::Num, AttrKind::Color, AttrKind::Size],
            modules: Module::ALL.into_iter().collect(),
            skip_identity_steps: true,
        }
    }
}

impl ExtractionConfig {
    pub fn without(mut self, m: Module) -> Self {
        self.modules.remove(&m);
        self
    }

    pub fn only(mut self, ms: &[Module]) -> Self {
        self.modules = ms.iter().copied().collect();
        self
    }
}

/// Components of `pd(J)` as a set; empty for the zero and unit ideals.
pub fn pd_set(j: &Concept) -> BTreeSet<Concept> {
    primary_decompose(j).map(|pd| pd.into_components().into_iter().collect()).unwrap_or_default()
}

/// `I ⊆ ⟨A_attr⟩`: every generator of a nonzero `I` involves a variable of `attr`.
pub fn inside_attr(i: &Concept, attr: AttrKind, schema: &Schema) -> bool {
    !i.is_zero() && i.mingen().iter().all(|g| g.support().any(|v| schema.kind(v) == attr))
}

/// Primary decompositions of the sum and intersection of a row.
pub struct RowDecomposition {
    pub sum: BTreeSet<Concept>,
    pub intersection: BTreeSet<Concept>,
}

impl RowDecomposition {
    pub fn new(row: &[Concept]) -> Self {
        RowDecomposition { sum: pd_set(&Concept::sum_all(row)), intersection: pd_set(&Concept::intersect_all(row)) }
    }

    /// `pd(J_+) ∩ pd(J_∩)`.
    pub fn shared(&self) -> impl Iterator<Item = &Concept> {
        self.sum.intersection(&self.intersection)
    }

    /// `pd(J_∩) ∖ pd(J_+)`.
    pub fn novel(&self) -> impl Iterator<Item = &Concept> {
        self.intersection.difference(&self.sum)
    }

    /// The shared components inside `⟨A_attr⟩`.
    pub fn shared_in(&self, attr: AttrKind, schema: &Schema) -> Vec<Concept> {
        self.shared().filter(|i| inside_attr(i, attr, schema)).cloned().collect()
    }

    /// The novel components inside `⟨A_attr⟩`.
    pub fn novel_in(&self, attr: AttrKind, schema: &Schema) -> Vec<Concept> {
        self.novel().filter(|i| inside_attr(i, attr, schema)).cloned().collect()
    }
}

fn check_row(row: &[Concept], min: usize) -> Result<(), ReasoningError> {
    if row.len() < min {
        return Err(ReasoningError::WrongCount { what: "cells in the row", expected: min, found: row.len() });
    }
    Ok(())
}

pub fn p_intra(row: &[Concept], schema: &Schema) -> Result<BTreeSet<Pattern>, ReasoningError> {
    check_row(row, 2)?;
    Ok(intra_from(&RowDecomposition::new(row), schema))
}

fn intra_from(rd: &RowDecomposition, schema: &Schema) -> BTreeSet<Pattern> {
    let mut out = BTreeSet::new();
    for i in rd.shared() {
        for attr in AttrKind::ALL {
            if inside_attr(i, attr, schema) {
                out.insert(Pattern::Intra { attr, arity: i.len() });
            }
        }
    }
    out
}

pub fn p_inter(row: &[Concept], schema: &Schema) -> Result<BTreeSet<Pattern>, ReasoningError> {
    check_row(row, 2)?;
    Ok(inter_from(&RowDecomposition::new(row), schema))
}

fn inter_from(rd: &RowDecomposition, schema: &Schema) -> BTreeSet<Pattern> {
    AttrKind::ALL
        .into_iter()
        .filter_map(|attr| {
            let d = rd.novel_in(attr, schema);
            (!d.is_empty()).then_some(Pattern::Inter { attr, components: d })
        })
        .collect()
}

/// Components shared by `pd(f_next^{k-1-i}(J_i | delta))` over the row.
pub fn shifted_common_components(row: &[Concept], delta: i64, schema: &Schema) -> BTreeSet<Concept> {
    let k = row.len();
    let mut common: Option<BTreeSet<Concept>> = None;
    for (i, cell) in row.iter().enumerate() {
        let comps = pd_set(&f_next_iter(cell, delta, k - 1 - i, schema));
        common = Some(match common {
            None => comps,
            Some(c) => c.intersection(&comps).cloned().collect(),
        });
        if common.as_ref().is_some_and(BTreeSet::is_empty) {
            break;
        }
    }
    common.unwrap_or_default()
}

pub fn p_comp(row: &[Concept], schema: &Schema, deltas: &[i64]) -> Result<BTreeSet<Pattern>, ReasoningError> {
    check_row(row, 2)?;
    let mut out = BTreeSet::new();
    for &delta in deltas {
        let common = shifted_common_components(row, delta, schema);
        for attr in AttrKind::ALL {
            if common.iter().any(|i| inside_attr(i, attr, schema)) {
                out.insert(Pattern::Comp { attr, delta });
            }
        }
    }
    Ok(out)
}

/// Numeric readout of a cell for the binary module.
pub fn readout(j: &Concept, attr: AttrKind, schema: &Schema) -> Option<i64> {
    match attr {
        AttrKind::Num => Some(g_num(j) as i64),
        AttrKind::Color | AttrKind::Size => g_attr(j, attr, schema).map(|i| i as i64),
        AttrKind::Pos | AttrKind::Type => None,
    }
}

/// Left-to-right evaluation of `values[0] op_0 values[1] op_1 ...`.
pub fn fold_ops(values: &[i64], ops: &[BinOp]) -> Option<i64> {
    let (first, rest) = values.split_first()?;
    rest.iter().zip(ops).try_fold(*first, |acc, (&v, op)| op.apply(acc, v))
}

fn op_tuples(ops: &[BinOp], len: usize) -> Vec<Vec<BinOp>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|prefix| {
                ops.iter().map(move |&o| {
                    let mut p = prefix.clone();
                    p.push(o);
                    p
                })
            })
            .collect()
    })
}

pub fn p_binary(
    row: &[Concept],
    schema: &Schema,
    attrs: &[AttrKind],
    ops: &[BinOp],
) -> Result<BTreeSet<Pattern>, ReasoningError> {
    check_row(row, 3)?;
    let mut out = BTreeSet::new();
    for &attr in attrs {
        let Some(values) = row.iter().map(|c| readout(c, attr, schema)).collect::<Option<Vec<i64>>>() else {
            continue;
        };
        let (target, lhs) = values.split_last().unwrap();
        for tuple in op_tuples(ops, row.len() - 2) {
            if fold_ops(lhs, &tuple) == Some(*target) {
                out.insert(Pattern::Binary { attr, ops: tuple });
            }
        }
    }
    Ok(out)
}

/// `f_next(·|delta)` fixes every value of `attr`.
pub fn step_is_identity(attr: AttrKind, delta: i64, schema: &Schema) -> bool {
    schema.attribute(attr).vars.iter().all(|&v| schema.step(v, delta) == v)
}

/// Union of the enabled modules on one row.
pub fn patterns_of_row(row: &[Concept], schema: &Schema, config: &ExtractionConfig) -> BTreeSet<Pattern> {
    let mut out = BTreeSet::new();
    if row.len() < 2 {
        return out;
    }
    let on = |m| config.modules.contains(&m);
    if on(Module::Intra) || on(Module::Inter) {
        let rd = RowDecomposition::new(row);
        if on(Module::Intra) {
            out.extend(intra_from(&rd, schema));
        }
        if on(Module::Inter) {
            out.extend(inter_from(&rd, schema));
        }
    }
    if on(Module::Comp) {
        let comp = p_comp(row, schema, &config.deltas).unwrap_or_default();
        out.extend(comp.into_iter().filter(|p| match p {
            Pattern::Comp { attr, delta } => !(config.skip_identity_steps && step_is_identity(*attr, *delta, schema)),
            _ => true,
        }));
    }
    if on(Module::Binary) && row.len() >= 3 {
        out.extend(p_binary(row, schema, &config.binary_attrs, &config.binary_ops).unwrap_or_default());
    }
    out
}

/// All tagged patterns of row `row` (0-based) over every view of the matrix.
pub fn p_all_row(
    m: &ConceptMatrix,
    row: usize,
    schema: &Schema,
    config: &ExtractionConfig,
) -> Result<BTreeSet<TaggedPattern>, ReasoningError> {
    let needed = 3 * row + 3;
    if row > 2 || m.cells.len() < needed {
        return Err(ReasoningError::RowOutOfRange { row, needed, found: m.cells.len() });
    }
    let mut out = BTreeSet::new();
    for view in split_views(m, schema) {
        for pattern in patterns_of_row(view.row(row), schema, config) {
            out.insert(TaggedPattern { pattern, view: view.view });
        }
    }
    Ok(out)
}

/// `P_1^(all) ∩ P_2^(all)` of a question matrix.
pub fn p12(m: &ConceptMatrix, schema: &Schema, config: &ExtractionConfig) -> Result<BTreeSet<TaggedPattern>, ReasoningError> {
    let p1 = p_all_row(m, 0, schema, config)?;
    let p2 = p_all_row(m, 1, schema, config)?;
    Ok(p1.intersection(&p2).cloned().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionReport {
    /// Number of row-1/2 patterns also found in row 3, per candidate.
    pub com_pattern: Vec<usize>,
    /// Smallest index attaining the maximum.
    pub chosen_index: usize,
    /// How many candidates attain the maximum.
    pub tie_size: usize,
    /// `|P_1^(all) ∩ P_2^(all)|`.
    pub row_patterns: usize,
    pub matched_patterns: Vec<Vec<TaggedPattern>>,
}

impl SelectionReport {
    pub fn maximizers(&self) -> Vec<usize> {
        let best = self.com_pattern.iter().copied().max().unwrap_or(0);
        (0..self.com_pattern.len()).filter(|&i| self.com_pattern[i] == best).collect()
    }
}

/// Scores every candidate by the patterns it shares with the first two rows.
pub fn select_answer(
    instance: &RpmInstance,
    schema: &Schema,
    config: &ExtractionConfig,
) -> Result<SelectionReport, ReasoningError> {
    if instance.question.len() != 8 {
        return Err(ReasoningError::WrongCount { what: "question panels", expected: 8, found: instance.question.len() });
    }
    if instance.answers.len() != 8 {
        return Err(ReasoningError::WrongCount { what: "candidates", expected: 8, found: instance.answers.len() });
    }
    let m = instance.question_matrix();
    let shared = p12(&m, schema, config)?;
    let mut com_pattern = Vec::with_capacity(8);
    let mut matched_patterns = Vec::with_capacity(8);
    for cand in &instance.answers {
        let p3 = p_all_row(&m.with_candidate(cand), 2, schema, config)?;
        let hits: Vec<TaggedPattern> = shared.intersection(&p3).cloned().collect();
        com_pattern.push(hits.len());
        matched_patterns.push(hits);
    }
    let best = *com_pattern.iter().max().unwrap();
    let chosen_index = com_pattern.iter().position(|&c| c == best).unwrap();
    let tie_size = com_pattern.iter().filter(|&&c| c == best).count();
    Ok(SelectionReport { com_pattern, chosen_index, tie_size, row_patterns: shared.len(), matched_patterns })
}

/// `(1/N) Σ [truth among maximizers] / n_i`; `None` for an empty batch.
pub fn weighted_accuracy<'a, I>(reports: I) -> Option<Rational64>
where
    I: IntoIterator<Item = (&'a SelectionReport, usize)>,
{
    let mut total = Rational64::from_integer(0);
    let mut n = 0i64;
    for (r, truth) in reports {
        n += 1;
        if r.maximizers().contains(&truth) {
            total += Rational64::new(1, r.tie_size as i64);
        }
    }
    (n > 0).then(|| total / Rational64::from_integer(n))
}

/// Fraction of reports whose chosen index is the ground truth.
pub fn plain_accuracy<'a, I>(reports: I) -> Option<Rational64>
where
    I: IntoIterator<Item = (&'a SelectionReport, usize)>,
{
    let (mut hit, mut n) = (0i64, 0i64);
    for (r, truth) in reports {
        n += 1;
        hit += (r.chosen_index == truth) as i64;
    }
    (n > 0).then(|| Rational64::new(hit, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concept::minimalize;
    use crate::monomial::Monomial;

    fn report(com: Vec<usize>) -> SelectionReport {
        let best = *com.iter().max().unwrap();
        SelectionReport {
            chosen_index: com.iter().position(|&c| c == best).unwrap(),
            tie_size: com.iter().filter(|&&c| c == best).count(),
            row_patterns: best,
            matched_patterns: vec![Vec::new(); com.len()],
            com_pattern: com,
        }
    }

    #[test]
    fn weighted_accuracy_examples() {
        let unique = report(vec![0, 3, 1, 0, 0, 0, 0, 0]);
        assert_eq!(weighted_accuracy([(&unique, 1), (&unique, 1)]), Some(Rational64::from_integer(1)));
        let flat = report(vec![2; 8]);
        assert_eq!(weighted_accuracy([(&flat, 5)]), Some(Rational64::new(1, 8)));
        let pair = report(vec![4, 4, 0, 0, 0, 0, 0, 0]);
        // 1 + 1/2 + 0 over three instances
        assert_eq!(weighted_accuracy([(&unique, 1), (&pair, 0), (&unique, 2)]), Some(Rational64::new(1, 2)));
        assert_eq!(weighted_accuracy(std::iter::empty()), None);
    }

    #[test]
    fn binary_on_counts_and_colors() {
        let s = Schema::iraven_full();
        let v = |l: &str| s.var(l).unwrap();
        let cell = |labels: &[&[&str]]| minimalize(labels.iter().map(|g| Monomial::from_vars(g.iter().map(|l| v(l)))));
        let one = cell(&[&["one", "(0.25,0.25,0.5)", "circle", "#0", "(0.4,0.5)"]]);
        let two = cell(&[
            &["two", "(0.25,0.25,0.5)", "circle", "#0", "(0.4,0.5)"],
            &["two", "(0.25,0.75,0.5)", "circle", "#0", "(0.4,0.5)"],
        ]);
        let three = cell(&[
            &["three", "(0.25,0.25,0.5)", "circle", "#0", "(0.4,0.5)"],
            &["three", "(0.25,0.75,0.5)", "circle", "#0", "(0.4,0.5)"],
            &["three", "(0.75,0.25,0.5)", "circle", "#0", "(0.4,0.5)"],
        ]);
        let ops = [BinOp::Add, BinOp::Sub];
        let got = p_binary(&[one, two, three], &s, &[AttrKind::Num], &ops).unwrap();
        assert!(got.contains(&Pattern::Binary { attr: AttrKind::Num, ops: vec![BinOp::Add] }));

        // color indices 5, 3, 2
        let c = |col: &str| cell(&[&["one", "(0.5,0.5,1.0)", "square", col, "(0.4,1)"]]);
        let got = p_binary(&[c("#112"), c("#168"), c("#196")], &s, &[AttrKind::Color], &ops).unwrap();
        assert_eq!(got, BTreeSet::from([Pattern::Binary { attr: AttrKind::Color, ops: vec![BinOp::Sub] }]));
    }

    #[test]
    fn identical_row_gives_intra_and_no_inter() {
        let s = Schema::running_example();
        let v = |l: &str| s.var(l).unwrap();
        let cell = minimalize([Monomial::from_vars(["one", "left", "square", "gray", "avg"].map(v))]);
        let row = vec![cell.clone(), cell.clone(), cell];
        let intra = p_intra(&row, &s).unwrap();
        for attr in AttrKind::ALL {
            assert!(intra.contains(&Pattern::Intra { attr, arity: 1 }), "{attr}");
        }
        assert!(p_inter(&row, &s).unwrap().is_empty());
    }

    #[test]
    fn short_rows_rejected() {
        let s = Schema::running_example();
        assert!(p_intra(&[], &s).is_err());
        let m = ConceptMatrix::new(Vec::new());
        assert!(matches!(p_all_row(&m, 0, &s, &ExtractionConfig::default()), Err(ReasoningError::RowOutOfRange { .. })));
    }
}
