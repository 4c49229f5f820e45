//! Teams (databases), their kernel algebras, and the dependency checkers.

mod checks;
mod data;
mod reduction;

use thiserror::Error;

use crate::algebra::AlgebraError;

pub use checks::{
    check_atom, check_emvd, check_fd, tuple_independence, CheckReport, CheckStats, Mode, RowWitness,
};
pub use data::{load_team, AttributeTuple, ColumnFunction, Fibers, Format, Schema, Team};
pub use reduction::{kernel_algebra, verify_reduction, ConsistencyReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TeamError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("unknown attribute {0:?}")]
    UnknownAttribute(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl TeamError {
    pub(crate) fn format(line: usize, message: impl Into<String>) -> Self {
        TeamError::Format {
            line,
            message: message.into(),
        }
    }
}
