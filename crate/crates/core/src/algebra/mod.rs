//! Finite fields of sets over an explicit row universe.
//!
//! An algebra is stored as its atom partition. Subalgebra tests, atom
//! projections and free amalgams all work on block ids, and independence
//! `A ⫫_C B` can be decided by four routes that must agree.

mod amalgam;
mod independence;
mod partition;
mod rowset;

use thiserror::Error;

pub use amalgam::{free_amalgam, FreeAmalgam};
pub use independence::{
    common_subalgebra, independence_fast, independence_oracles, IndependenceVerdict,
    IndependenceWitness, OracleConfig, OracleVerdicts, Route, DEFAULT_CAP_ATOMS,
};
pub use partition::{
    atom_projection, generate_subalgebra, is_subalgebra, PartitionAlgebra, SubalgebraWitness,
};
pub use rowset::{RowSet, Universe};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("row {row} is outside the universe of size {size}")]
    RowOutOfRange { row: usize, size: usize },
    #[error("universes differ: {left} vs {right} rows")]
    UniverseMismatch { left: usize, right: usize },
    #[error("{labels} labels given for a universe of {size} rows")]
    LabelCount { labels: usize, size: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("C is not a subalgebra of {of}")]
    NotSubalgebra { of: &'static str },
    #[error("{route} route refuses {atoms} atoms (cap {cap})")]
    Capacity {
        route: &'static str,
        atoms: usize,
        cap: usize,
    },
}
