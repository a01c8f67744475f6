//! Exact arithmetic, graded polynomial rings, free modules over them, and
//! degreewise homology.

mod complex;
pub mod linalg;
mod module;
mod poly;

pub use complex::{
    matrix_from_json, matrix_to_json, poly_from_json, poly_to_json, DegreeSlice, EntryJson,
    FreeComplex, FreeComplexJson, VariableJson,
};
pub use module::{eval_at, kernel_q, rank_q, to_integer, GradedFreeModule, PolyMatrix, SliceBasis};
pub use poly::{elem_sym, elem_sym_in, q, q_from_str, q_to_string, Mono, Poly, PolyRing, Q};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("module mismatch: {0}")]
    ModuleMismatch(String),
    #[error("differential does not square to zero")]
    NotAComplex,
    #[error("window: {0}")]
    Window(String),
    #[error("parse error: {0}")]
    Parse(String),
}
