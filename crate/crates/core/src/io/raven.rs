//! Adapter for RAVEN / I-RAVEN XML annotations.
//!
//! Each of the 16 `Panel` elements (8 question panels, then 8 candidates)
//! contains `Entity` elements with a `bbox` of the form
//! `[x_center, y_center, width, height]` and integer `Type`, `Size`, `Color`
//! indices. The [`RavenMapping`] says how those indices map to schema labels.

use std::path::Path;

use roxmltree::{Document, Node};
use serde::{Deserialize, Serialize};

use crate::concept::Concept;
use crate::domain::{encode_panel, PanelEntity, RpmInstance};
use crate::error::{DataError, EncodeError};
use crate::monomial::VariableId;
use crate::schema::{AttrKind, Schema};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RavenMapping {
    pub panel_tag: String,
    pub entity_tag: String,
    pub bbox_attr: String,
    pub type_attr: String,
    pub size_attr: String,
    pub color_attr: String,
    /// Attribute of the root element holding the 0-based answer index, if any.
    pub target_attr: String,
    /// Annotation index of the first schema type value.
    pub type_offset: i64,
    /// Relative entity size for each annotation size index.
    pub size_values: Vec<f64>,
    /// Maximum distance when snapping coordinates to schema labels.
    pub tolerance: f64,
}

impl Default for RavenMapping {
    fn default() -> Self {
        RavenMapping {
            panel_tag: "Panel".into(),
            entity_tag: "Entity".into(),
            bbox_attr: "bbox".into(),
            type_attr: "Type".into(),
            size_attr: "Size".into(),
            color_attr: "Color".into(),
            target_attr: "target".into(),
            type_offset: 1,
            size_values: vec![0.4, 0.5, 0.6, 0.7, 0.8, 0.9],
            tolerance: 1e-3,
        }
    }
}

/// Numbers inside a label such as `(0.5,0.25,0.5)` or `[0.5, 0.5, 1, 1]`.
pub fn parse_tuple(label: &str) -> Option<Vec<f64>> {
    let inner = label.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    inner.split(',').map(|t| t.trim().parse::<f64>().ok()).collect()
}

fn snap(schema: &Schema, attr: AttrKind, target: &[f64], tol: f64) -> Option<VariableId> {
    schema.attribute(attr).vars.iter().copied().find(|&v| {
        parse_tuple(schema.label(v))
            .is_some_and(|t| t.len() == target.len() && t.iter().zip(target).all(|(a, b)| (a - b).abs() <= tol))
    })
}

struct Ctx<'a> {
    path: &'a Path,
    schema: &'a Schema,
    mapping: &'a RavenMapping,
}

impl Ctx<'_> {
    fn fail(&self, panel: usize, entity: usize, message: impl Into<String>) -> DataError {
        DataError::Annotation { path: self.path.to_path_buf(), panel, entity, message: message.into() }
    }

    fn index(&self, node: Node, attr: &str, panel: usize, entity: usize) -> Result<i64, DataError> {
        let raw = node.attribute(attr).ok_or_else(|| self.fail(panel, entity, format!("missing `{attr}`")))?;
        raw.trim().parse::<i64>().map_err(|_| self.fail(panel, entity, format!("`{attr}` is not an integer: {raw}")))
    }

    fn entity(&self, node: Node, panel: usize, entity: usize) -> Result<PanelEntity, DataError> {
        let m = self.mapping;
        let bbox_raw =
            node.attribute(m.bbox_attr.as_str()).ok_or_else(|| self.fail(panel, entity, format!("missing `{}`", m.bbox_attr)))?;
        let bbox = parse_tuple(bbox_raw)
            .filter(|b| b.len() >= 3)
            .ok_or_else(|| self.fail(panel, entity, format!("malformed bbox {bbox_raw}")))?;
        let pos = snap(self.schema, AttrKind::Pos, &bbox[..3], m.tolerance).ok_or_else(|| {
            self.fail(panel, entity, format!("no position within {} of ({}, {}, {})", m.tolerance, bbox[0], bbox[1], bbox[2]))
        })?;

        let types = &self.schema.attribute(AttrKind::Type).vars;
        let t = self.index(node, &m.type_attr, panel, entity)? - m.type_offset;
        let shape = usize::try_from(t)
            .ok()
            .and_then(|i| types.get(i).copied())
            .ok_or_else(|| self.fail(panel, entity, format!("type index {} out of range", t + m.type_offset)))?;

        let colors = &self.schema.attribute(AttrKind::Color).vars;
        let c = self.index(node, &m.color_attr, panel, entity)?;
        let color = usize::try_from(c)
            .ok()
            .and_then(|i| colors.get(i).copied())
            .ok_or_else(|| self.fail(panel, entity, format!("color index {c} out of range")))?;

        let s = self.index(node, &m.size_attr, panel, entity)?;
        let rel = usize::try_from(s)
            .ok()
            .and_then(|i| m.size_values.get(i).copied())
            .ok_or_else(|| self.fail(panel, entity, format!("size index {s} out of range")))?;
        let size = snap(self.schema, AttrKind::Size, &[rel, bbox[2]], m.tolerance)
            .ok_or_else(|| self.fail(panel, entity, format!("no size value ({rel}, {})", bbox[2])))?;
        Ok(PanelEntity { pos, shape, color, size })
    }
}

/// Parses an annotation document already in memory.
pub fn parse_raven_xml(
    text: &str,
    path: &Path,
    schema: &Schema,
    mapping: &RavenMapping,
) -> Result<RpmInstance, DataError> {
    let doc = Document::parse(text).map_err(|e| DataError::Xml { path: path.to_path_buf(), message: e.to_string() })?;
    let ctx = Ctx { path, schema, mapping };
    let panels: Vec<Node> = doc.descendants().filter(|n| n.has_tag_name(mapping.panel_tag.as_str())).collect();
    if panels.len() != 16 {
        return Err(DataError::PanelCount { path: path.to_path_buf(), field: "Panel", expected: 16, found: panels.len() });
    }
    let mut concepts: Vec<Concept> = Vec::with_capacity(16);
    for (pi, panel) in panels.iter().enumerate() {
        let entities = panel
            .descendants()
            .filter(|n| n.has_tag_name(mapping.entity_tag.as_str()))
            .enumerate()
            .map(|(ei, n)| ctx.entity(n, pi, ei))
            .collect::<Result<Vec<_>, _>>()?;
        let c = encode_panel(&entities, schema).map_err(|source: EncodeError| DataError::Encode {
            path: path.to_path_buf(),
            location: format!("panel {pi}"),
            source,
        })?;
        concepts.push(c);
    }
    let ground_truth = match doc.root_element().attribute(mapping.target_attr.as_str()) {
        None => None,
        Some(raw) => {
            let gt = raw
                .trim()
                .parse::<usize>()
                .map_err(|_| DataError::Xml { path: path.to_path_buf(), message: format!("bad target `{raw}`") })?;
            if gt >= 8 {
                return Err(DataError::GroundTruth { path: path.to_path_buf(), index: gt });
            }
            Some(gt)
        }
    };
    let answers = concepts.split_off(8);
    Ok(RpmInstance {
        id: path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        schema_name: schema.name().to_string(),
        question: concepts,
        answers,
        ground_truth,
    })
}

pub fn load_raven_xml(path: &Path, schema: &Schema, mapping: &RavenMapping) -> Result<RpmInstance, DataError> {
    let text = std::fs::read_to_string(path).map_err(|source| DataError::Io { path: path.to_path_buf(), source })?;
    parse_raven_xml(&text, path, schema, mapping)
}
