//! A workbench for the countable atomless Boolean algebra, realized as the
//! clopen subsets of Cantor space.
//!
//! Types of finite tuples are zero patterns of the cells they generate with a
//! base. On top of that sit the disjoint splitting operation, a dividing
//! witness for dependent pairs, a non-forking extension for independent ones,
//! and the finite-atomic demonstration where extensions fail.

mod atba;
mod clopen;
mod dividing;
mod extension;
mod qftype;
mod split;

use thiserror::Error;

use crate::algebra::AlgebraError;

pub use atba::{atba_demo, AtbaCandidate, AtbaReport};
pub use clopen::ClopenSet;
pub use dividing::{dividing_witness, DividingWitness, InconsistencyCertificate};
pub use extension::{
    disjoint_test_sequence, nonforking_extension, AtomConstruction, Extension,
    DEFAULT_SEARCH_PIECES,
};
pub use qftype::{
    cells, finite_shadow, generated_atoms, indiscernible_check, qf_type, FiniteShadow,
    Indiscernibility, SequenceKind, WitnessSequence, ZeroPattern, DEFAULT_WINDOW,
};
pub use split::split;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WorkbenchError {
    #[error("cannot parse clopen set: {0}")]
    Parse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("sequence is not indiscernible: subtuple {violation:?} differs from the first")]
    NotIndiscernible { violation: Vec<usize> },
    #[error("no construction for the shape below base atom {atom}")]
    UnsupportedShape { atom: usize },
    #[error("no extension found below base atom {atom} within {pieces} pieces")]
    NotFound { atom: usize, pieces: usize },
    #[error("constructed object fails its contract: {0}")]
    ContractViolated(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
