//! Panels as concepts: encoding, the cyclic successor map, numeric readouts,
//! and the per-position views of a concept matrix.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::concept::{minimalize, Concept};
use crate::decompose::primary_decompose;
use crate::error::EncodeError;
use crate::monomial::{Monomial, VariableId};
use crate::schema::{AttrKind, Schema};

/// One entity of a panel; each field is a variable of the named attribute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PanelEntity {
    pub pos: VariableId,
    pub shape: VariableId,
    pub color: VariableId,
    pub size: VariableId,
}

impl PanelEntity {
    pub fn get(&self, attr: AttrKind) -> Option<VariableId> {
        match attr {
            AttrKind::Num => None,
            AttrKind::Pos => Some(self.pos),
            AttrKind::Type => Some(self.shape),
            AttrKind::Color => Some(self.color),
            AttrKind::Size => Some(self.size),
        }
    }

    /// Builds an entity from labels, checking each against its attribute.
    pub fn from_labels(schema: &Schema, pos: &str, shape: &str, color: &str, size: &str) -> Result<Self, EncodeError> {
        let look = |attr: AttrKind, label: &str| {
            schema.var_of(attr, label).ok_or_else(|| EncodeError::UnknownLabel { attr, label: label.to_string() })
        };
        Ok(PanelEntity {
            pos: look(AttrKind::Pos, pos)?,
            shape: look(AttrKind::Type, shape)?,
            color: look(AttrKind::Color, color)?,
            size: look(AttrKind::Size, size)?,
        })
    }
}

/// Concept of a panel: one squarefree generator `x_num·x_pos·x_type·x_color·x_size` per entity.
pub fn encode_panel(entities: &[PanelEntity], schema: &Schema) -> Result<Concept, EncodeError> {
    if entities.is_empty() {
        return Err(EncodeError::EmptyPanel);
    }
    for e in entities {
        for attr in AttrKind::ENTITY {
            let v = e.get(attr).unwrap();
            if v.index() >= schema.num_vars() || schema.kind(v) != attr {
                let label = if v.index() < schema.num_vars() { schema.label(v).to_string() } else { format!("x{}", v.0) };
                return Err(EncodeError::WrongAttribute { attr, label });
            }
        }
    }
    let mut seen = BTreeSet::new();
    for e in entities {
        if !seen.insert(e.pos) {
            return Err(EncodeError::DuplicatePosition(schema.label(e.pos).to_string()));
        }
    }
    let num = schema.num_var(entities.len()).ok_or(EncodeError::TooManyEntities {
        count: entities.len(),
        max: schema.attribute(AttrKind::Num).vars.len(),
    })?;
    Ok(minimalize(entities.iter().map(|e| Monomial::from_vars([num, e.pos, e.shape, e.color, e.size]))))
}

/// Reads the entities back out of a panel concept, ordered by position variable.
pub fn decode_panel(c: &Concept, schema: &Schema) -> Result<Vec<PanelEntity>, EncodeError> {
    let mut out = Vec::with_capacity(c.len());
    for g in c.mingen() {
        let pick = |attr: AttrKind| g.support().find(|&v| schema.kind(v) == attr).ok_or(EncodeError::MissingAttribute(attr));
        out.push(PanelEntity {
            pos: pick(AttrKind::Pos)?,
            shape: pick(AttrKind::Type)?,
            color: pick(AttrKind::Color)?,
            size: pick(AttrKind::Size)?,
        });
    }
    out.sort();
    Ok(out)
}

/// Moves every variable `delta` steps along its cyclic sub-sequence.
pub fn f_next(j: &Concept, delta: i64, schema: &Schema) -> Concept {
    j.map_vars(|v| schema.step(v, delta))
}

/// `f_next` applied `times` times.
pub fn f_next_iter(j: &Concept, delta: i64, times: usize, schema: &Schema) -> Concept {
    (0..times).fold(j.clone(), |acc, _| f_next(&acc, delta, schema))
}

/// Number of entities: `|mingen(J)|`.
pub fn g_num(j: &Concept) -> usize {
    j.len()
}

/// Index of the attribute value shared by every generator, within its
/// sub-sequence; `None` when generators disagree or the value is unordered.
pub fn g_attr(j: &Concept, attr: AttrKind, schema: &Schema) -> Option<usize> {
    let mut shared: Option<VariableId> = None;
    for g in j.mingen() {
        let v = g.support().find(|&v| schema.kind(v) == attr)?;
        match shared {
            None => shared = Some(v),
            Some(s) if s == v => {}
            Some(_) => return None,
        }
    }
    schema.numeric_index(shared?)
}

pub fn g_color(j: &Concept, schema: &Schema) -> Option<usize> {
    g_attr(j, AttrKind::Color, schema)
}

pub fn g_size(j: &Concept, schema: &Schema) -> Option<usize> {
    g_attr(j, AttrKind::Size, schema)
}

/// Which part of the matrix a view keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "view", content = "pos", rename_all = "lowercase")]
pub enum ViewTag {
    Full,
    /// Only the entity at this position.
    Bar(VariableId),
    /// Every entity except the one at this position.
    Hat(VariableId),
}

impl ViewTag {
    pub fn display<'a>(&'a self, schema: &'a Schema) -> impl fmt::Display + 'a {
        ViewTagDisplay { tag: self, schema }
    }
}

struct ViewTagDisplay<'a> {
    tag: &'a ViewTag,
    schema: &'a Schema,
}

impl fmt::Display for ViewTagDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag {
            ViewTag::Full => write!(f, "full"),
            ViewTag::Bar(p) => write!(f, "bar({})", self.schema.label(*p)),
            ViewTag::Hat(p) => write!(f, "hat({})", self.schema.label(*p)),
        }
    }
}

/// Cells in row-major order: 8 for a question, 9 with a candidate inserted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptMatrix {
    pub cells: Vec<Concept>,
    pub view: ViewTag,
}

impl ConceptMatrix {
    pub fn new(cells: Vec<Concept>) -> Self {
        ConceptMatrix { cells, view: ViewTag::Full }
    }

    /// Cells of row `r` (0-based); the third row may be incomplete.
    pub fn row(&self, r: usize) -> &[Concept] {
        let lo = (3 * r).min(self.cells.len());
        let hi = (3 * r + 3).min(self.cells.len());
        &self.cells[lo..hi]
    }

    /// The matrix with `candidate` placed in the ninth cell.
    pub fn with_candidate(&self, candidate: &Concept) -> Self {
        let mut cells = self.cells[..8.min(self.cells.len())].to_vec();
        cells.push(candidate.clone());
        ConceptMatrix { cells, view: self.view }
    }
}

/// A puzzle: eight question panels in row-major order and eight candidates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RpmInstance {
    pub id: String,
    pub schema_name: String,
    pub question: Vec<Concept>,
    pub answers: Vec<Concept>,
    pub ground_truth: Option<usize>,
}

impl RpmInstance {
    pub fn question_matrix(&self) -> ConceptMatrix {
        ConceptMatrix::new(self.question.clone())
    }
}

fn position_of(g: &Monomial, schema: &Schema) -> Option<VariableId> {
    g.support().find(|&v| schema.kind(v) == AttrKind::Pos)
}

/// Positions occupied by exactly one entity in every cell, ascending.
pub fn com_pos(m: &ConceptMatrix, schema: &Schema) -> Vec<VariableId> {
    schema
        .attribute(AttrKind::Pos)
        .vars
        .iter()
        .copied()
        .filter(|&p| {
            !m.cells.is_empty()
                && m.cells.iter().all(|c| c.mingen().iter().filter(|g| g.exponent(p) > 0).count() == 1)
        })
        .collect()
}

/// Reference formulation: position variables appearing in some component
/// shared by the primary decompositions of every cell.
pub fn com_pos_by_pd(m: &ConceptMatrix, schema: &Schema) -> Vec<VariableId> {
    let mut shared: Option<BTreeSet<Concept>> = None;
    for c in &m.cells {
        let comps: BTreeSet<Concept> = match primary_decompose(c) {
            Ok(pd) => pd.into_components().into_iter().collect(),
            Err(_) => return Vec::new(),
        };
        shared = Some(match shared {
            None => comps,
            Some(s) => s.intersection(&comps).cloned().collect(),
        });
    }
    let mut out: Vec<VariableId> = shared
        .unwrap_or_default()
        .iter()
        .flat_map(|c| c.mingen().iter().filter_map(|g| g.pure_power_var()).collect::<Vec<_>>())
        .filter(|&v| schema.kind(v) == AttrKind::Pos)
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Rewrites the number variable of every generator to the generator count.
pub fn renormalize(gens: &[Monomial], schema: &Schema) -> Concept {
    let Some(num) = schema.num_var(gens.len()) else {
        return minimalize(gens.iter().cloned());
    };
    minimalize(gens.iter().map(|g| {
        Monomial::from_pairs(g.factors().iter().copied().filter(|&(v, _)| schema.kind(v) != AttrKind::Num).chain([(num, 1)]))
    }))
}

/// The full matrix followed by `Bar(p)`, `Hat(p)` for each common position.
///
/// A `Hat` view with an empty cell is dropped, and so is a `Hat` view whose
/// cells coincide with a `Bar` view (or an earlier `Hat` view).
pub fn split_views(m: &ConceptMatrix, schema: &Schema) -> Vec<ConceptMatrix> {
    let positions = com_pos(m, schema);
    let full = ConceptMatrix { cells: m.cells.clone(), view: ViewTag::Full };
    let mut bars = Vec::with_capacity(positions.len());
    let mut hats = Vec::with_capacity(positions.len());
    for &p in &positions {
        let mut bar = Vec::with_capacity(m.cells.len());
        let mut hat = Vec::with_capacity(m.cells.len());
        for c in &m.cells {
            let (inside, outside): (Vec<Monomial>, Vec<Monomial>) =
                c.mingen().iter().cloned().partition(|g| position_of(g, schema) == Some(p));
            bar.push(renormalize(&inside, schema));
            hat.push(renormalize(&outside, schema));
        }
        bars.push(ConceptMatrix { cells: bar, view: ViewTag::Bar(p) });
        let hat = ConceptMatrix { cells: hat, view: ViewTag::Hat(p) };
        hats.push((!hat.cells.iter().any(Concept::is_zero)).then_some(hat));
    }
    for i in 0..hats.len() {
        let Some(h) = &hats[i] else { continue };
        let dup = bars.iter().any(|b| b.cells == h.cells) || hats[..i].iter().flatten().any(|o| o.cells == h.cells);
        if dup {
            hats[i] = None;
        }
    }
    let mut out = vec![full];
    for (bar, hat) in bars.into_iter().zip(hats) {
        out.push(bar);
        out.extend(hat);
    }
    out
}
