//! Reading and writing instances, schemas and reports.

pub mod json;
pub mod raven;
pub mod synthetic;
pub mod text;

pub use json::{load_json, load_json_with, resolve_schema, save_json, EntityRecord, InstanceDocument};
pub use raven::{load_raven_xml, RavenMapping};
pub use synthetic::{family_instance, generate_synthetic, sample_spec, Layout, Rule, RuleFamily, SyntheticInstance, SyntheticSpec};
pub use text::{parse_ideal, parse_polynomial, parse_polynomials, VarNames};
