//! Seeded synthetic puzzles with planted row rules.
//!
//! Every attribute of every entity follows one rule per row; values are
//! shared by all entities of a panel. Value draws that would make the first
//! two rows agree on a rule other than the planted one are rejected, so the
//! shared patterns are exactly the planted ones. Distractors change one
//! ruled attribute of the correct panel.

use std::fmt;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::concept::Concept;
use crate::domain::{encode_panel, ConceptMatrix, PanelEntity, RpmInstance};
use crate::error::DataError;
use crate::invariance::{p12, p_all_row, BinOp, ExtractionConfig};
use crate::monomial::VariableId;
use crate::schema::{AttrKind, Schema};

const ATTEMPTS: usize = 1000;
const DELTAS: [i64; 4] = [1, 2, -1, -2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layout {
    /// One entity in the middle of the panel.
    Center,
    /// Two entities side by side.
    LeftRight,
    /// Up to four entities on a 2×2 grid.
    FourGrid,
}

impl Layout {
    pub const ALL: [Layout; 3] = [Layout::Center, Layout::LeftRight, Layout::FourGrid];

    pub fn positions(self) -> &'static [&'static str] {
        match self {
            Layout::Center => &["(0.5,0.5,1.0)"],
            Layout::LeftRight => &["(0.5,0.25,0.5)", "(0.5,0.75,0.5)"],
            Layout::FourGrid => &["(0.25,0.25,0.5)", "(0.25,0.75,0.5)", "(0.75,0.25,0.5)", "(0.75,0.75,0.5)"],
        }
    }

    /// Sub-panel width used by the size labels.
    fn width(self) -> &'static str {
        match self {
            Layout::Center => "1",
            Layout::LeftRight | Layout::FourGrid => "0.5",
        }
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layout::Center => "center",
            Layout::LeftRight => "left-right",
            Layout::FourGrid => "four-grid",
        })
    }
}

impl std::str::FromStr for Layout {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Layout::ALL.into_iter().find(|l| l.to_string() == s).ok_or_else(|| format!("unknown layout `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// One value everywhere.
    Constant,
    /// Each row is a permutation of the same three values.
    SetPermutation,
    /// Each row steps `delta` along the cyclic order.
    Progression(i64),
    /// Third value is the first combined with the second.
    Arithmetic(BinOp),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleFamily {
    Constant,
    SetPermutation,
    Progression,
    Arithmetic,
}

impl RuleFamily {
    pub const ALL: [RuleFamily; 4] =
        [RuleFamily::Constant, RuleFamily::SetPermutation, RuleFamily::Progression, RuleFamily::Arithmetic];
}

impl fmt::Display for RuleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleFamily::Constant => "constant",
            RuleFamily::SetPermutation => "set-permutation",
            RuleFamily::Progression => "progression",
            RuleFamily::Arithmetic => "arithmetic",
        })
    }
}

impl std::str::FromStr for RuleFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        RuleFamily::ALL.into_iter().find(|r| r.to_string() == s).ok_or_else(|| format!("unknown rule family `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub layout: Layout,
    /// Rule on the entity count; `None` keeps every layout position filled.
    pub num: Option<Rule>,
    pub shape: Rule,
    pub color: Rule,
    pub size: Rule,
    /// Attribute perturbed first when building distractors.
    pub target: AttrKind,
}

impl SyntheticSpec {
    pub fn rule(&self, attr: AttrKind) -> Option<Rule> {
        match attr {
            AttrKind::Num => self.num,
            AttrKind::Pos => None,
            AttrKind::Type => Some(self.shape),
            AttrKind::Color => Some(self.color),
            AttrKind::Size => Some(self.size),
        }
    }

    /// Layout fixed and every entity attribute ruled, so the answer panel is
    /// determined by the first two rows.
    pub fn pattern_determined(&self) -> bool {
        matches!(self.num, None | Some(Rule::Constant))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticInstance {
    pub instance: RpmInstance,
    pub spec: SyntheticSpec,
    pub pattern_determined: bool,
}

/// Values an attribute ranges over in a layout, as schema variables
/// (for `num`, the variable of each admissible count).
struct Domain {
    vars: Vec<VariableId>,
    /// Values are entity counts `1..=vars.len()` rather than cyclic indices.
    counts: bool,
}

impl Domain {
    fn new(attr: AttrKind, layout: Layout, schema: &Schema) -> Result<Self, DataError> {
        let missing = |what: String| DataError::Synthetic { attempts: 0, reason: format!("schema lacks {what}") };
        match attr {
            AttrKind::Num => {
                let n = layout.positions().len();
                let vars = (1..=n).map(|k| schema.num_var(k).ok_or_else(|| missing(format!("count {k}")))).collect::<Result<_, _>>()?;
                Ok(Domain { vars, counts: true })
            }
            AttrKind::Size => {
                let suffix = format!(",{})", layout.width());
                let vars: Vec<VariableId> = schema
                    .attribute(AttrKind::Size)
                    .cycles
                    .iter()
                    .find(|c| schema.label(c[0]).ends_with(&suffix))
                    .cloned()
                    .ok_or_else(|| missing(format!("sizes of width {}", layout.width())))?;
                Ok(Domain { vars, counts: false })
            }
            _ => {
                let a = schema.attribute(attr);
                let vars = a.cycles.first().cloned().ok_or_else(|| missing(format!("a cyclic order for {attr}")))?;
                Ok(Domain { vars, counts: false })
            }
        }
    }

    fn len(&self) -> i64 {
        self.vars.len() as i64
    }

    /// Numeric value as seen by the binary module.
    fn readout(&self, i: i64) -> i64 {
        if self.counts {
            i + 1
        } else {
            i
        }
    }

    fn step(&self, i: i64, delta: i64) -> Option<i64> {
        if self.counts {
            let j = i + delta;
            (0..self.len()).contains(&j).then_some(j)
        } else {
            Some((i + delta).rem_euclid(self.len()))
        }
    }
}

fn draw_rows(rule: Rule, dom: &Domain, rng: &mut ChaCha8Rng) -> Option<[[i64; 3]; 3]> {
    let n = dom.len();
    let mut rows = [[0i64; 3]; 3];
    match rule {
        Rule::Constant => {
            let v = rng.random_range(0..n);
            rows = [[v; 3]; 3];
        }
        Rule::SetPermutation => {
            if n < 3 {
                return None;
            }
            let mut all: Vec<i64> = (0..n).collect();
            all.shuffle(rng);
            let set = [all[0], all[1], all[2]];
            for row in rows.iter_mut() {
                let mut p = set;
                p.shuffle(rng);
                *row = p;
            }
        }
        Rule::Progression(delta) => {
            for row in rows.iter_mut() {
                let s = rng.random_range(0..n);
                let b = dom.step(s, delta)?;
                *row = [s, b, dom.step(b, delta)?];
            }
        }
        Rule::Arithmetic(op) => {
            for row in rows.iter_mut() {
                let pairs: Vec<[i64; 3]> = (0..n)
                    .flat_map(|a| (0..n).map(move |b| (a, b)))
                    .filter_map(|(a, b)| {
                        let (ra, rb) = (dom.readout(a), dom.readout(b));
                        if rb == 0 {
                            return None;
                        }
                        let rc = op.apply(ra, rb)?;
                        let c = if dom.counts { rc - 1 } else { rc };
                        (0..n).contains(&c).then_some([a, b, c])
                    })
                    .collect();
                *row = *pairs.choose(rng)?;
            }
        }
    }
    Some(rows)
}

fn is_progression(r: &[i64; 3], delta: i64, dom: &Domain, cycle_len: i64) -> bool {
    // The compositional module steps along the schema cycle, which for counts is the full number alphabet.
    let step = |i: i64| if dom.counts { (i + delta).rem_euclid(cycle_len) } else { dom.step(i, delta).unwrap() };
    step(r[0]) == r[1] && step(r[1]) == r[2]
}

/// True when the first two rows share a rule other than `rule`.
fn accidental(rule: Rule, rows: &[[i64; 3]; 3], dom: &Domain, cycle_len: i64, binary: bool) -> bool {
    let (r1, r2) = (&rows[0], &rows[1]);
    let constant = |r: &[i64; 3]| r[0] == r[1] && r[1] == r[2];
    if rule != Rule::Constant && constant(r1) && constant(r2) {
        return true;
    }
    for delta in DELTAS {
        if rule != Rule::Progression(delta) && is_progression(r1, delta, dom, cycle_len) && is_progression(r2, delta, dom, cycle_len) {
            return true;
        }
    }
    if rule != Rule::SetPermutation && !constant(r1) && !constant(r2) {
        let set = |r: &[i64; 3]| {
            let mut s = r.to_vec();
            s.sort();
            s.dedup();
            s
        };
        if set(r1) == set(r2) {
            return true;
        }
    }
    if binary {
        for op in [BinOp::Add, BinOp::Sub] {
            let holds = |r: &[i64; 3]| op.apply(dom.readout(r[0]), dom.readout(r[1])) == Some(dom.readout(r[2]));
            if rule != Rule::Arithmetic(op) && holds(r1) && holds(r2) {
                return true;
            }
        }
    }
    false
}

/// A varying entity count fills position prefixes, which can line up into a
/// position pattern in rows 1 and 2 that the answer row does not continue.
fn position_accident(question: &[Concept], correct: &Concept, schema: &Schema) -> bool {
    let config = ExtractionConfig::default();
    let m = ConceptMatrix::new(question.to_vec());
    let (Ok(shared), Ok(third)) = (p12(&m, schema, &config), p_all_row(&m.with_candidate(correct), 2, schema, &config)) else {
        return true;
    };
    shared.iter().any(|tp| tp.pattern.attr() == AttrKind::Pos && !third.contains(tp))
}

fn rule_admissible(attr: AttrKind, rule: Rule) -> bool {
    !(matches!(rule, Rule::Arithmetic(_)) && attr == AttrKind::Type)
}

fn random_rule(family: RuleFamily, attr: AttrKind, rng: &mut ChaCha8Rng) -> Rule {
    match family {
        RuleFamily::Constant => Rule::Constant,
        RuleFamily::SetPermutation => Rule::SetPermutation,
        RuleFamily::Progression => {
            let choices: &[i64] = if attr == AttrKind::Num { &[1, -1] } else { &DELTAS };
            Rule::Progression(*choices.choose(rng).unwrap())
        }
        RuleFamily::Arithmetic => Rule::Arithmetic(*[BinOp::Add, BinOp::Sub].choose(rng).unwrap()),
    }
}

/// Picks a target attribute for `family`, plants the family's rule on it and
/// draws random rules for the remaining entity attributes.
pub fn sample_spec(family: RuleFamily, layout: Layout, seed: u64) -> SyntheticSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0x5EED);
    let mut targets = vec![AttrKind::Color, AttrKind::Size];
    if family != RuleFamily::Arithmetic {
        targets.push(AttrKind::Type);
    }
    if layout == Layout::FourGrid {
        targets.push(AttrKind::Num);
    }
    let target = *targets.choose(&mut rng).unwrap();
    let mut pick = |attr: AttrKind| -> Rule {
        if attr == target {
            return random_rule(family, attr, &mut rng);
        }
        loop {
            let f = *RuleFamily::ALL.choose(&mut rng).unwrap();
            let r = random_rule(f, attr, &mut rng);
            if rule_admissible(attr, r) {
                return r;
            }
        }
    };
    let shape = pick(AttrKind::Type);
    let color = pick(AttrKind::Color);
    let size = pick(AttrKind::Size);
    let num = (target == AttrKind::Num).then(|| pick(AttrKind::Num));
    SyntheticSpec { layout, num, shape, color, size, target }
}

fn build_panel(
    layout: Layout,
    count: usize,
    shape: VariableId,
    color: VariableId,
    size: VariableId,
    schema: &Schema,
) -> Result<Concept, DataError> {
    let entities = layout.positions()[..count]
        .iter()
        .map(|p| {
            let pos = schema
                .var_of(AttrKind::Pos, p)
                .ok_or_else(|| DataError::Synthetic { attempts: 0, reason: format!("schema lacks position {p}") })?;
            Ok(PanelEntity { pos, shape, color, size })
        })
        .collect::<Result<Vec<_>, DataError>>()?;
    encode_panel(&entities, schema).map_err(|e| DataError::Synthetic { attempts: 0, reason: e.to_string() })
}

/// Builds an instance satisfying `spec`, deterministic in `seed`.
pub fn generate_synthetic(spec: &SyntheticSpec, schema: &Schema, seed: u64) -> Result<SyntheticInstance, DataError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attrs = [AttrKind::Num, AttrKind::Type, AttrKind::Color, AttrKind::Size];
    let mut domains = Vec::with_capacity(4);
    for a in attrs {
        domains.push(Domain::new(a, spec.layout, schema)?);
    }
    let num_cycle = schema.attribute(AttrKind::Num).vars.len() as i64;
    let full_count = spec.layout.positions().len() as i64 - 1;

    for _ in 0..ATTEMPTS {
        let mut values: Vec<[[i64; 3]; 3]> = Vec::with_capacity(4);
        let mut ok = true;
        for (a, dom) in attrs.iter().zip(&domains) {
            let rows = match spec.rule(*a) {
                None => Some([[full_count; 3]; 3]),
                Some(rule) => draw_rows(rule, dom, &mut rng)
                    .filter(|rows| !accidental(rule, rows, dom, num_cycle, *a != AttrKind::Type)),
            };
            match rows {
                Some(r) => values.push(r),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let cell = |vals: [i64; 4]| -> Result<Concept, DataError> {
            build_panel(
                spec.layout,
                vals[0] as usize + 1,
                domains[1].vars[vals[1] as usize],
                domains[2].vars[vals[2] as usize],
                domains[3].vars[vals[3] as usize],
                schema,
            )
        };
        let at = |r: usize, c: usize| [values[0][r][c], values[1][r][c], values[2][r][c], values[3][r][c]];
        let mut question = Vec::with_capacity(8);
        for r in 0..3 {
            for c in 0..3 {
                if r == 2 && c == 2 {
                    continue;
                }
                question.push(cell(at(r, c))?);
            }
        }
        let correct_vals = at(2, 2);
        let correct = cell(correct_vals)?;
        if !matches!(spec.num, None | Some(Rule::Constant)) && position_accident(&question, &correct, schema) {
            continue;
        }

        let mut ruled: Vec<usize> = vec![attrs.iter().position(|&a| a == spec.target).unwrap()];
        for (k, a) in attrs.iter().enumerate() {
            if spec.rule(*a).is_some() && *a != spec.target {
                ruled.push(k);
            }
        }
        let mut answers = vec![correct.clone()];
        let mut tries = 0;
        while answers.len() < 8 && tries < 200 {
            tries += 1;
            let k = ruled[(answers.len() - 1) % ruled.len()];
            let alternatives: Vec<i64> = (0..domains[k].len()).filter(|&v| v != correct_vals[k]).collect();
            let mut vals = correct_vals;
            vals[k] = *alternatives.choose(&mut rng).unwrap();
            let c = cell(vals)?;
            if !answers.contains(&c) {
                answers.push(c);
            }
        }
        if answers.len() < 8 {
            continue;
        }
        let gt = rng.random_range(0..8usize);
        answers.swap(0, gt);
        let pattern_determined = spec.pattern_determined();
        let instance = RpmInstance {
            id: format!("synthetic-{}-{seed}", spec.layout),
            schema_name: schema.name().to_string(),
            question,
            answers,
            ground_truth: Some(gt),
        };
        return Ok(SyntheticInstance { instance, spec: spec.clone(), pattern_determined });
    }
    Err(DataError::Synthetic { attempts: ATTEMPTS, reason: format!("no admissible values for {spec:?}") })
}

/// Samples a spec for `family` and builds an instance; ids encode family, layout and seed.
pub fn family_instance(family: RuleFamily, layout: Layout, schema: &Schema, seed: u64) -> Result<SyntheticInstance, DataError> {
    let spec = sample_spec(family, layout, seed);
    let mut out = generate_synthetic(&spec, schema, seed)?;
    out.instance.id = format!("{family}-{layout}-{seed}");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::decode_panel;

    fn spec(layout: Layout, shape: Rule, color: Rule, size: Rule) -> SyntheticSpec {
        SyntheticSpec { layout, num: None, shape, color, size, target: AttrKind::Type }
    }

    #[test]
    fn constant_everywhere_repeats_one_panel() {
        let s = Schema::iraven_full();
        let out = generate_synthetic(&spec(Layout::Center, Rule::Constant, Rule::Constant, Rule::Constant), &s, 3).unwrap();
        let inst = &out.instance;
        assert!(inst.question.iter().all(|c| *c == inst.question[0]));
        assert_eq!(inst.answers[inst.ground_truth.unwrap()], inst.question[0]);
        assert!(out.pattern_determined);
    }

    #[test]
    fn type_progression_rows() {
        let s = Schema::iraven_full();
        let out = generate_synthetic(&spec(Layout::Center, Rule::Progression(1), Rule::Constant, Rule::Constant), &s, 11).unwrap();
        let q = &out.instance.question;
        for r in 0..2 {
            let shapes: Vec<VariableId> = (0..3).map(|c| decode_panel(&q[3 * r + c], &s).unwrap()[0].shape).collect();
            assert_eq!(s.step(shapes[0], 1), shapes[1]);
            assert_eq!(s.step(shapes[1], 1), shapes[2]);
        }
    }

    #[test]
    fn distractors_differ_in_one_attribute() {
        let s = Schema::iraven_full();
        for seed in 0..20 {
            let sp = sample_spec(RuleFamily::SetPermutation, Layout::LeftRight, seed);
            let out = generate_synthetic(&sp, &s, seed).unwrap();
            let inst = &out.instance;
            let gt = inst.ground_truth.unwrap();
            let truth = decode_panel(&inst.answers[gt], &s).unwrap();
            let mut seen = std::collections::BTreeSet::new();
            for (i, a) in inst.answers.iter().enumerate() {
                assert!(seen.insert(a.clone()));
                if i == gt {
                    continue;
                }
                let e = decode_panel(a, &s).unwrap();
                let diffs = [AttrKind::Type, AttrKind::Color, AttrKind::Size]
                    .iter()
                    .filter(|&&k| e[0].get(k) != truth[0].get(k))
                    .count();
                assert_eq!(diffs, 1);
            }
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let s = Schema::iraven_full();
        let a = family_instance(RuleFamily::Arithmetic, Layout::FourGrid, &s, 42).unwrap();
        let b = family_instance(RuleFamily::Arithmetic, Layout::FourGrid, &s, 42).unwrap();
        assert_eq!(a, b);
    }
}
