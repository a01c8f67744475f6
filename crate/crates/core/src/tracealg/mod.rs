//! Modules over the skew group algebras `Q[x, theta] # S_n`, `Q[x] # S_n`
//! and `Q[x, y] # S_n`, the Koszul duality between the first and the last,
//! and the representations `wedge^a P` that co-represent Hochschild degrees.

mod algebra;
mod duality;
mod module;
pub mod rep;

pub use algebra::{variable_perm, x_ring, xy_ring, AlgebraTag, DegreeEntry, SkewAlgebra, SkewElement};
pub use duality::{coinv_y_enh, coinv_y_twisted, gamma_a, inv_theta_enh, inv_theta_twisted, tau_render};
pub use module::{
    free_a_complex, free_module, nilp_y_check, triv_theta, triv_y, weight_heart_check, NilpReport, SkewModule,
    SkewModuleJson, THETA_DEGREE, Y_DEGREE,
};
pub use rep::{induced_rep, wedge_perm_rep, PermRep};

use thiserror::Error;

use crate::multigrade::GradeError;
use crate::polyalg::PolyError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("out of range: {0}")]
    Range(String),
    #[error("shape: {0}")]
    Shape(String),
    #[error("relation fails: {0}")]
    Relations(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Grade(#[from] GradeError),
}
