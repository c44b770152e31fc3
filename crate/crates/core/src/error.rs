use std::path::PathBuf;

use thiserror::Error;

use crate::schema::AttrKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("primary decomposition of the zero ideal is undefined")]
    ZeroIdeal,
    #[error("primary decomposition of the unit ideal is undefined")]
    UnitIdeal,
    #[error("Buchberger completion exceeded {0} S-pair reductions")]
    IterationBound(usize),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("variable `{0}` is declared more than once")]
    DuplicateVariable(String),
    #[error("attribute `{0}` is declared more than once")]
    DuplicateAttribute(AttrKind),
    #[error("attribute `{0}` is missing from the schema")]
    MissingAttribute(AttrKind),
    #[error("variable `{label}` of attribute `{attr}` is neither in a sub-sequence, the sink, nor sink-mapped")]
    UnorderedVariable { attr: AttrKind, label: String },
    #[error("variable `{label}` appears in more than one sub-sequence or sink role of attribute `{attr}`")]
    OverlappingRoles { attr: AttrKind, label: String },
    #[error("`{label}` is referenced by attribute `{attr}` but not among its values")]
    UnknownReference { attr: AttrKind, label: String },
    #[error("unknown schema preset `{0}`")]
    UnknownPreset(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("panel has no entities")]
    EmptyPanel,
    #[error("position `{0}` is occupied by more than one entity")]
    DuplicatePosition(String),
    #[error("{count} entities exceed the number alphabet ({max} values)")]
    TooManyEntities { count: usize, max: usize },
    #[error("variable `{label}` does not belong to attribute `{attr}`")]
    WrongAttribute { attr: AttrKind, label: String },
    #[error("unknown {attr} label `{label}`")]
    UnknownLabel { attr: AttrKind, label: String },
    #[error("generator carries no `{0}` variable")]
    MissingAttribute(AttrKind),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasoningError {
    #[error("matrix has {found} cells, row {row} needs at least {needed}")]
    RowOutOfRange { row: usize, needed: usize, found: usize },
    #[error("expected {expected} {what}, found {found}")]
    WrongCount { what: &'static str, expected: usize, found: usize },
    #[error("no position is common to every panel; answer generation needs at least one")]
    NoCommonPosition,
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: line {line}, column {column}: {message}")]
    Json { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{path}: XML error: {message}")]
    Xml { path: PathBuf, message: String },
    #[error("{path}: {location}: {source}")]
    Encode { path: PathBuf, location: String, source: EncodeError },
    #[error("{path}: expected {expected} panels in `{field}`, found {found}")]
    PanelCount { path: PathBuf, field: &'static str, expected: usize, found: usize },
    #[error("{path}: ground truth {index} is out of range (8 candidates)")]
    GroundTruth { path: PathBuf, index: usize },
    #[error("{path}: {source}")]
    Schema { path: PathBuf, source: SchemaError },
    #[error("{path}: panel {panel}, entity {entity}: {message}")]
    Annotation { path: PathBuf, panel: usize, entity: usize, message: String },
    #[error("synthetic generation failed after {attempts} attempts: {reason}")]
    Synthetic { attempts: usize, reason: String },
}
