//! Attribute schemas: which variables describe which attribute, and how the
//! values of each attribute are cyclically ordered.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::concept::Concept;
use crate::error::SchemaError;
use crate::monomial::VariableId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttrKind {
    Num,
    Pos,
    Type,
    Color,
    Size,
}

impl AttrKind {
    pub const ALL: [AttrKind; 5] = [AttrKind::Num, AttrKind::Pos, AttrKind::Type, AttrKind::Color, AttrKind::Size];
    /// Attributes carried by a single entity.
    pub const ENTITY: [AttrKind; 4] = [AttrKind::Pos, AttrKind::Type, AttrKind::Color, AttrKind::Size];

    pub fn label(self) -> &'static str {
        match self {
            AttrKind::Num => "num",
            AttrKind::Pos => "pos",
            AttrKind::Type => "type",
            AttrKind::Color => "color",
            AttrKind::Size => "size",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for AttrKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for AttrKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        AttrKind::ALL.into_iter().find(|a| a.label() == s).ok_or_else(|| format!("unknown attribute `{s}`"))
    }
}

/// Serialized description of one attribute.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeSpec {
    pub label: AttrKind,
    /// Variable labels, in index order.
    pub values: Vec<String>,
    /// Disjoint cyclic sub-sequences.
    #[serde(default)]
    pub cycles: Vec<Vec<String>>,
    /// Absorbing variable that unordered values step to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sink: Option<String>,
    /// Values outside every sub-sequence; they step to the sink.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sink_mapped: Vec<String>,
}

/// Serialized schema document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaSpec {
    pub name: String,
    pub attributes: Vec<AttributeSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Place {
    /// Position `index` in sub-sequence `cycle` of the attribute.
    Cycle { cycle: usize, index: usize },
    Sink,
    SinkMapped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attribute {
    pub kind: AttrKind,
    pub vars: Vec<VariableId>,
    pub cycles: Vec<Vec<VariableId>>,
    pub sink: Option<VariableId>,
}

/// An immutable, validated attribute schema over a dense variable alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    spec: SchemaSpec,
    labels: Vec<String>,
    kind_of: Vec<AttrKind>,
    place: Vec<Place>,
    attrs: Vec<Attribute>,
    by_label: HashMap<String, VariableId>,
}

impl Schema {
    pub fn from_spec(spec: SchemaSpec) -> Result<Self, SchemaError> {
        let mut labels = Vec::new();
        let mut kind_of = Vec::new();
        let mut by_label = HashMap::new();
        let mut slots: Vec<Option<Attribute>> = vec![None; 5];
        for a in &spec.attributes {
            if slots[a.label.slot()].is_some() {
                return Err(SchemaError::DuplicateAttribute(a.label));
            }
            let mut vars = Vec::with_capacity(a.values.len());
            for v in &a.values {
                let id = VariableId::from(labels.len());
                if by_label.insert(v.clone(), id).is_some() {
                    return Err(SchemaError::DuplicateVariable(v.clone()));
                }
                labels.push(v.clone());
                kind_of.push(a.label);
                vars.push(id);
            }
            slots[a.label.slot()] = Some(Attribute { kind: a.label, vars, cycles: Vec::new(), sink: None });
        }
        let mut attrs = Vec::with_capacity(5);
        for (k, slot) in AttrKind::ALL.into_iter().zip(slots) {
            attrs.push(slot.ok_or(SchemaError::MissingAttribute(k))?);
        }

        let mut place: Vec<Option<Place>> = vec![None; labels.len()];
        for a in &spec.attributes {
            let resolve = |label: &String| -> Result<VariableId, SchemaError> {
                by_label
                    .get(label)
                    .copied()
                    .filter(|v| kind_of[v.index()] == a.label)
                    .ok_or_else(|| SchemaError::UnknownReference { attr: a.label, label: label.clone() })
            };
            let mut claim = |v: VariableId, p: Place| -> Result<(), SchemaError> {
                if place[v.index()].is_some() {
                    return Err(SchemaError::OverlappingRoles { attr: a.label, label: labels[v.index()].clone() });
                }
                place[v.index()] = Some(p);
                Ok(())
            };
            let attr = &mut attrs[a.label.slot()];
            for (c, cyc) in a.cycles.iter().enumerate() {
                let ids = cyc.iter().map(resolve).collect::<Result<Vec<_>, _>>()?;
                for (i, &v) in ids.iter().enumerate() {
                    claim(v, Place::Cycle { cycle: c, index: i })?;
                }
                attr.cycles.push(ids);
            }
            if let Some(s) = &a.sink {
                let v = resolve(s)?;
                claim(v, Place::Sink)?;
                attr.sink = Some(v);
            }
            for s in &a.sink_mapped {
                claim(resolve(s)?, Place::SinkMapped)?;
            }
            if attr.sink.is_none() && !a.sink_mapped.is_empty() {
                return Err(SchemaError::UnknownReference { attr: a.label, label: "<sink>".into() });
            }
        }
        let place = place
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| SchemaError::UnorderedVariable { attr: kind_of[i], label: labels[i].clone() }))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Schema { spec, labels, kind_of, place, attrs, by_label })
    }

    /// Built-in schemas: `iraven-full` and `running-example`.
    pub fn preset(name: &str) -> Result<Self, SchemaError> {
        match name {
            "iraven-full" => Ok(Self::iraven_full()),
            "running-example" => Ok(Self::running_example()),
            other => Err(SchemaError::UnknownPreset(other.to_string())),
        }
    }

    pub fn spec(&self) -> &SchemaSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn num_vars(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: VariableId) -> &str {
        &self.labels[v.index()]
    }

    pub fn var(&self, label: &str) -> Option<VariableId> {
        self.by_label.get(label).copied()
    }

    /// Looks up a label and checks that it belongs to `attr`.
    pub fn var_of(&self, attr: AttrKind, label: &str) -> Option<VariableId> {
        self.var(label).filter(|&v| self.kind(v) == attr)
    }

    pub fn kind(&self, v: VariableId) -> AttrKind {
        self.kind_of[v.index()]
    }

    pub fn place(&self, v: VariableId) -> Place {
        self.place[v.index()]
    }

    pub fn attribute(&self, k: AttrKind) -> &Attribute {
        &self.attrs[k.slot()]
    }

    /// The attribute concept `⟨A_k⟩`.
    pub fn attribute_concept(&self, k: AttrKind) -> Concept {
        Concept::simple(self.attribute(k).vars.iter().copied())
    }

    /// Does every generator of `c` use only variables of attribute `k`?
    pub fn within(&self, c: &Concept, k: AttrKind) -> bool {
        !c.is_zero() && c.mingen().iter().all(|g| g.support().all(|v| self.kind(v) == k))
    }

    /// Variable for an entity count; `None` outside the number alphabet.
    pub fn num_var(&self, count: usize) -> Option<VariableId> {
        count.checked_sub(1).and_then(|i| self.attribute(AttrKind::Num).vars.get(i).copied())
    }

    /// Index of a variable within its sub-sequence.
    pub fn numeric_index(&self, v: VariableId) -> Option<usize> {
        match self.place(v) {
            Place::Cycle { index, .. } => Some(index),
            _ => None,
        }
    }

    /// Cyclic successor at distance `delta`; unordered values step to the sink.
    pub fn step(&self, v: VariableId, delta: i64) -> VariableId {
        let attr = self.attribute(self.kind(v));
        match self.place(v) {
            Place::Cycle { cycle, index } => {
                let cyc = &attr.cycles[cycle];
                let n = cyc.len() as i64;
                cyc[(index as i64 + delta).rem_euclid(n) as usize]
            }
            Place::Sink | Place::SinkMapped => attr.sink.expect("validated: sink exists when referenced"),
        }
    }

    pub fn name_fn(&self) -> impl Fn(VariableId) -> String + '_ {
        move |v| {
            self.labels
                .get(v.index())
                .map(|l| format!("x_{l}"))
                .unwrap_or_else(|| format!("x{}", v.0))
        }
    }

    pub fn show(&self, c: &Concept) -> String {
        let name = self.name_fn();
        c.display_with(&name).to_string()
    }

    /// The reduced alphabet of the worked example: two positions, five
    /// shapes, four colors, three sizes.
    pub fn running_example() -> Self {
        fn strs(xs: &[&str]) -> Vec<String> {
            xs.iter().map(|s| s.to_string()).collect()
        }
        let types = strs(&["triangle", "square", "pentagon", "hexagon", "circle"]);
        let colors = strs(&["white", "gray", "dgray", "black"]);
        let sizes = strs(&["small", "avg", "large"]);
        let spec = SchemaSpec {
            name: "running-example".into(),
            attributes: vec![
                AttributeSpec { label: AttrKind::Num, values: strs(&["one", "two"]), cycles: vec![strs(&["one", "two"])], sink: None, sink_mapped: vec![] },
                AttributeSpec {
                    label: AttrKind::Pos,
                    values: strs(&["left", "right", "dummy"]),
                    cycles: vec![],
                    sink: Some("dummy".into()),
                    sink_mapped: strs(&["left", "right"]),
                },
                AttributeSpec { label: AttrKind::Type, values: types.clone(), cycles: vec![types], sink: None, sink_mapped: vec![] },
                AttributeSpec { label: AttrKind::Color, values: colors.clone(), cycles: vec![colors], sink: None, sink_mapped: vec![] },
                AttributeSpec { label: AttrKind::Size, values: sizes.clone(), cycles: vec![sizes], sink: None, sink_mapped: vec![] },
            ],
        };
        Schema::from_spec(spec).expect("running-example preset is valid")
    }

    /// The full 69-variable alphabet covering every configuration of the dataset.
    pub fn iraven_full() -> Self {
        let nums: Vec<String> = ["one", "two", "three", "four", "five", "six", "seven", "eight", "nine"].iter().map(|s| s.to_string()).collect();
        let tuple = |v: &[&str]| format!("({})", v.join(","));
        let grid3: Vec<String> = ["0.16", "0.5", "0.83"]
            .iter()
            .flat_map(|x| ["0.16", "0.5", "0.83"].iter().map(move |y| (x, y)))
            .map(|(x, y)| tuple(&[x, y, "0.33"]))
            .collect();
        let grid2: Vec<String> = ["0.25", "0.75"]
            .iter()
            .flat_map(|x| ["0.25", "0.75"].iter().map(move |y| (x, y)))
            .map(|(x, y)| tuple(&[x, y, "0.5"]))
            .collect();
        let inner: Vec<String> = ["0.42", "0.58"]
            .iter()
            .flat_map(|x| ["0.42", "0.58"].iter().map(move |y| (x, y)))
            .map(|(x, y)| tuple(&[x, y, "0.15"]))
            .collect();
        let loose: Vec<String> = [["0.5", "0.25", "0.5"], ["0.5", "0.75", "0.5"], ["0.25", "0.5", "0.5"], ["0.75", "0.5", "0.5"], ["0.5", "0.5", "1.0"]]
            .iter()
            .map(|t| tuple(t))
            .collect();
        let mut positions: Vec<String> = grid3.iter().chain(&grid2).chain(&inner).chain(&loose).cloned().collect();
        positions.push("dummy".into());
        let types: Vec<String> = ["triangle", "square", "pentagon", "hexagon", "circle"].iter().map(|s| s.to_string()).collect();
        let colors: Vec<String> = [255, 224, 196, 168, 140, 112, 84, 56, 28, 0].iter().map(|c| format!("#{c}")).collect();
        let size_seq = |width: &str, rel: &[&str]| -> Vec<String> { rel.iter().map(|r| tuple(&[r, width])).collect() };
        let six = ["0.4", "0.5", "0.6", "0.7", "0.8", "0.9"];
        let size_cycles = vec![
            size_seq("0.15", &["0.6", "0.7", "0.8", "0.9"]),
            size_seq("0.33", &six),
            size_seq("0.5", &six),
            size_seq("1", &six),
        ];
        let spec = SchemaSpec {
            name: "iraven-full".into(),
            attributes: vec![
                AttributeSpec { label: AttrKind::Num, values: nums.clone(), cycles: vec![nums], sink: None, sink_mapped: vec![] },
                AttributeSpec {
                    label: AttrKind::Pos,
                    values: positions,
                    cycles: vec![grid3, grid2, inner],
                    sink: Some("dummy".into()),
                    sink_mapped: loose,
                },
                AttributeSpec { label: AttrKind::Type, values: types.clone(), cycles: vec![types], sink: None, sink_mapped: vec![] },
                AttributeSpec { label: AttrKind::Color, values: colors.clone(), cycles: vec![colors], sink: None, sink_mapped: vec![] },
                AttributeSpec { label: AttrKind::Size, values: size_cycles.concat(), cycles: size_cycles, sink: None, sink_mapped: vec![] },
            ],
        };
        Schema::from_spec(spec).expect("iraven-full preset is valid")
    }
}
