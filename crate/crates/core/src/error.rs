//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("element is not a unit")]
    NonUnit,
    #[error("index out of range: {0}")]
    BadIndex(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("generated set is not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("element outside the character's domain")]
    OutOfDomain,
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("character pair is not injective")]
    NotInjectivePair,
    #[error("matrix has the wrong shape: {0}")]
    BadShape(String),
    #[error("matrix is not regular")]
    NotRegular,
    #[error("eigenvalue clusters are ambiguous: {0}")]
    DegenerateSpectrum(String),
}

pub type Result<T> = std::result::Result<T, Error>;
