//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FoliaError {
    #[error("missing bracket entry: {0}")]
    MissingBracket(String),

    #[error("map {0} is not homogeneous; degree slicing is inapplicable")]
    NonHomogeneous(String),

    #[error("form is not a scalar multiple of the transverse form")]
    NotProportional,

    #[error("cross anchor bracket does not vanish: {0}")]
    CrossBracketNonZero(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, FoliaError>;
