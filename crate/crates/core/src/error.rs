use thiserror::Error;

use crate::shrubbery::Shrubbery;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("parameter mismatch: {0}")]
    ParamMismatch(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("not a prefix code: {0} and {1} have overlapping cones")]
    NotPrefixCode(Shrubbery, Shrubbery),

    #[error("not a complete prefix code: {0}")]
    NotComplete(String),

    #[error("{0} is not an element of the multiset")]
    NotInMultiset(Shrubbery),

    #[error("depth {requested} is smaller than the code depth {needed}")]
    DepthTooSmall { requested: usize, needed: usize },

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("term still contains a lambda after resolving to depth {0}")]
    ResidualLambda(usize),

    #[error("term is not a tree image: {0}")]
    NotTreeImage(String),

    #[error("{0} is not below any leaf of the domain code")]
    InsufficientDepth(Shrubbery),

    #[error("element is not invertible")]
    NotInvertible,

    #[error("invalid root system: {0}")]
    InvalidRootSystem(String),

    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),

    #[error("not matrix-representable: {0}")]
    NotMatrixRepresentable(String),

    #[error("search budget exceeded: {0}")]
    Budget(String),

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("no deferment registered for letter `{0}`")]
    MissingDeferment(String),
}

pub type Result<T> = std::result::Result<T, Error>;
