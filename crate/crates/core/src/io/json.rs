//! Canonical JSON documents: instances, schemas and reports.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::concept::Concept;
use crate::domain::{decode_panel, encode_panel, PanelEntity, RpmInstance};
use crate::error::{DataError, EncodeError, SchemaError};
use crate::schema::{AttrKind, Schema, SchemaSpec};

/// One entity as string labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityRecord {
    pub pos: String,
    #[serde(rename = "type")]
    pub shape: String,
    pub color: String,
    pub size: String,
}

/// Serialized form of an [`RpmInstance`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDocument {
    #[serde(default)]
    pub id: String,
    pub schema: String,
    pub panels: Vec<Vec<EntityRecord>>,
    pub answers: Vec<Vec<EntityRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<usize>,
}

fn read(path: &Path) -> Result<String, DataError> {
    fs::read_to_string(path).map_err(|source| DataError::Io { path: path.to_path_buf(), source })
}

fn json_error(path: &Path, e: serde_json::Error) -> DataError {
    DataError::Json { path: path.to_path_buf(), line: e.line(), column: e.column(), message: e.to_string() }
}

/// Reads any JSON document, with line and column diagnostics.
pub fn load_document<T: DeserializeOwned>(path: &Path) -> Result<T, DataError> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| json_error(path, e))
}

/// Writes pretty JSON with a trailing newline.
pub fn save_document<T: Serialize>(value: &T, path: &Path) -> Result<(), DataError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| json_error(path, e))?;
    text.push('\n');
    fs::write(path, text).map_err(|source| DataError::Io { path: path.to_path_buf(), source })
}

pub fn save_report<T: Serialize>(report: &T, path: &Path) -> Result<(), DataError> {
    save_document(report, path)
}

pub fn load_report<T: DeserializeOwned>(path: &Path) -> Result<T, DataError> {
    load_document(path)
}

pub fn load_schema(path: &Path) -> Result<Schema, DataError> {
    let spec: SchemaSpec = load_document(path)?;
    Schema::from_spec(spec).map_err(|source| DataError::Schema { path: path.to_path_buf(), source })
}

pub fn save_schema(schema: &Schema, path: &Path) -> Result<(), DataError> {
    save_document(schema.spec(), path)
}

/// A preset name, or else a path to a schema document.
pub fn resolve_schema(name_or_path: &str) -> Result<Schema, DataError> {
    match Schema::preset(name_or_path) {
        Ok(s) => Ok(s),
        Err(SchemaError::UnknownPreset(_)) if Path::new(name_or_path).is_file() => load_schema(Path::new(name_or_path)),
        Err(source) => Err(DataError::Schema { path: name_or_path.into(), source }),
    }
}

fn encode_records(
    path: &Path,
    field: &str,
    idx: usize,
    records: &[EntityRecord],
    schema: &Schema,
) -> Result<Concept, DataError> {
    let wrap = |location: String, source: EncodeError| DataError::Encode { path: path.to_path_buf(), location, source };
    let mut entities = Vec::with_capacity(records.len());
    for (k, r) in records.iter().enumerate() {
        let look = |attr: AttrKind, label: &str| {
            schema.var_of(attr, label).ok_or_else(|| {
                wrap(format!("{field}[{idx}][{k}].{attr}"), EncodeError::UnknownLabel { attr, label: label.to_string() })
            })
        };
        entities.push(PanelEntity {
            pos: look(AttrKind::Pos, &r.pos)?,
            shape: look(AttrKind::Type, &r.shape)?,
            color: look(AttrKind::Color, &r.color)?,
            size: look(AttrKind::Size, &r.size)?,
        });
    }
    encode_panel(&entities, schema).map_err(|e| wrap(format!("{field}[{idx}]"), e))
}

/// Validates and encodes a parsed document.
pub fn instance_from_document(doc: &InstanceDocument, schema: &Schema, path: &Path) -> Result<RpmInstance, DataError> {
    for (field, list) in [("panels", &doc.panels), ("answers", &doc.answers)] {
        if list.len() != 8 {
            return Err(DataError::PanelCount { path: path.to_path_buf(), field, expected: 8, found: list.len() });
        }
    }
    if let Some(gt) = doc.ground_truth {
        if gt >= 8 {
            return Err(DataError::GroundTruth { path: path.to_path_buf(), index: gt });
        }
    }
    let encode_all = |field: &str, list: &[Vec<EntityRecord>]| {
        list.iter().enumerate().map(|(i, recs)| encode_records(path, field, i, recs, schema)).collect::<Result<Vec<_>, _>>()
    };
    Ok(RpmInstance {
        id: doc.id.clone(),
        schema_name: schema.name().to_string(),
        question: encode_all("panels", &doc.panels)?,
        answers: encode_all("answers", &doc.answers)?,
        ground_truth: doc.ground_truth,
    })
}

/// Converts an instance back to labels; entities are ordered by position.
pub fn document_from_instance(inst: &RpmInstance, schema: &Schema) -> Result<InstanceDocument, EncodeError> {
    let records = |c: &Concept| -> Result<Vec<EntityRecord>, EncodeError> {
        Ok(decode_panel(c, schema)?
            .into_iter()
            .map(|e| EntityRecord {
                pos: schema.label(e.pos).to_string(),
                shape: schema.label(e.shape).to_string(),
                color: schema.label(e.color).to_string(),
                size: schema.label(e.size).to_string(),
            })
            .collect())
    };
    Ok(InstanceDocument {
        id: inst.id.clone(),
        schema: schema.name().to_string(),
        panels: inst.question.iter().map(records).collect::<Result<_, _>>()?,
        answers: inst.answers.iter().map(records).collect::<Result<_, _>>()?,
        ground_truth: inst.ground_truth,
    })
}

/// Loads an instance, resolving its schema by preset name.
pub fn load_json(path: &Path) -> Result<RpmInstance, DataError> {
    let doc: InstanceDocument = load_document(path)?;
    let schema = Schema::preset(&doc.schema).map_err(|source| DataError::Schema { path: path.to_path_buf(), source })?;
    instance_from_document(&doc, &schema, path)
}

/// Loads an instance against an explicit schema.
pub fn load_json_with(path: &Path, schema: &Schema) -> Result<RpmInstance, DataError> {
    let doc: InstanceDocument = load_document(path)?;
    instance_from_document(&doc, schema, path)
}

pub fn save_json(inst: &RpmInstance, schema: &Schema, path: &Path) -> Result<(), DataError> {
    let doc = document_from_instance(inst, schema)
        .map_err(|source| DataError::Encode { path: path.to_path_buf(), location: "instance".into(), source })?;
    save_document(&doc, path)
}
