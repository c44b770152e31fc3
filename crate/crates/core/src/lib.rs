//! Monomial-ideal reasoning for Raven-style progressive matrices.
//!
//! Panels are encoded as squarefree monomial ideals ("concepts"); patterns
//! are read off primary decompositions, and answers are selected or
//! generated from the patterns shared by the first two rows.

pub mod concept;
pub mod decompose;
pub mod domain;
pub mod error;
pub mod generation;
pub mod groebner;
pub mod invariance;
pub mod io;
pub mod monomial;
pub mod schema;

use num_rational::BigRational;

pub use concept::{minimalize, Concept};
pub use decompose::{primary_decompose, primary_decompose_by_splitting, PivotRule, PrimaryDecomposition};
pub use domain::{ConceptMatrix, PanelEntity, RpmInstance, ViewTag};
pub use error::{AlgebraError, DataError, EncodeError, ReasoningError, SchemaError};
pub use monomial::{Monomial, VariableId};
pub use schema::{AttrKind, Schema};

/// Polynomials with exact rational coefficients.
pub type QPolynomial = groebner::Polynomial<BigRational>;
/// Gröbner bases with exact rational coefficients.
pub type QGroebnerBasis = groebner::GroebnerBasis<BigRational>;
