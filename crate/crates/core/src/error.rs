//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid block: {0}")]
    InvalidBlock(String),
    #[error("operation requires a {expected} block")]
    WrongBlockKind { expected: &'static str },
    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),
    #[error("region is not E21-injective: {0}")]
    NotInjective(String),
    #[error("anchor lies outside the region")]
    AnchorOutside,
    #[error("no catalog case matches the block")]
    Unclassified,
    #[error("unknown catalog label `{0}`")]
    UnknownLabel(String),
    #[error("{0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
