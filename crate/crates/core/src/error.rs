use std::io;

use thiserror::Error;

use crate::code::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular over GF(3)")]
    SingularMatrix,

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported k: {0} (supported range 1..=16)")]
    UnsupportedK(usize),

    #[error("node {0} is unavailable")]
    NodeUnavailable(NodeId),

    /// The final repair system came out singular. Indicates a construction bug.
    #[error("repair system for node {0} is rank deficient")]
    InternalRankError(NodeId),

    #[error("intolerable failure set: {0}")]
    Intolerable(String),

    #[error("insufficient access: system rank {rank} short of {required}")]
    InsufficientAccess { rank: usize, required: usize },

    #[error("node {0} has already failed")]
    AlreadyFailed(NodeId),

    #[error("node {0} is live, nothing to repair")]
    NotFailed(NodeId),

    #[error("unknown node: {0}")]
    UnknownNode(String),

    #[error("corrupt chunk {path}: {reason}")]
    CorruptChunk { path: String, reason: String },

    #[error("bad manifest: {0}")]
    Manifest(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
