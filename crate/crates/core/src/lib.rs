//! Exact triply graded HOMFLY-PT homology of braid closures through Soergel
//! bimodules, plus the skew group algebra models and the grading calculus
//! that relate it to sheaves on the Hilbert scheme.

pub mod multigrade;
pub mod polyalg;
pub mod hochschild;
pub mod rouquier;
pub mod cli;
pub mod soergel;
pub mod supports;
pub mod tracealg;
