use thiserror::Error;

use crate::ordinal::ParseOrdinalError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    ParseOrdinal(#[from] ParseOrdinalError),
    #[error("malformed set literal {literal:?}: {reason}")]
    ParseSet { literal: String, reason: String },
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("set does not belong to this space: {0}")]
    SpaceMismatch(String),
    #[error("{what} is not closed: {set}")]
    NotClosed { what: &'static str, set: String },
    #[error("{what} is not open: {set}")]
    NotOpen { what: &'static str, set: String },
    #[error("{0} is empty")]
    Empty(&'static str),
    #[error("{set} is not contained in the subspace {subspace}")]
    OutsideSubspace { set: String, subspace: String },
    #[error("{0} is not a limit ordinal")]
    NotLimit(String),
    #[error("invalid decomposition: {0}")]
    Decomposition(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("construction stuck at stage {stage}: {reason}")]
    Stuck { stage: String, reason: String },
    #[error("theorem violation at {stage}: witness {witness}")]
    TheoremViolation { stage: String, witness: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
