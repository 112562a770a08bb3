use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

/// Errors raised by the orientation engine and its components.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("instance size must be at least 1")]
    InvalidSize,
    #[error("vertex {vertex} is out of range for n = {n}")]
    VertexOutOfRange { vertex: u32, n: u32 },
    #[error("self-loop at vertex {0} is not allowed")]
    SelfLoop(VertexId),
    #[error("edge {0} was never inserted")]
    UnknownEdge(EdgeId),
    #[error("edge {0} has already been deleted")]
    DeadEdge(EdgeId),
    #[error("no live edge between {0} and {1}")]
    NoLiveEdge(VertexId, VertexId),
    #[error("edge {0} is not part of the high-girth subgraph")]
    WrongPartition(EdgeId),
    #[error("state corruption: {0}")]
    StateCorruption(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("engine halted after an earlier invariant violation")]
    Poisoned,
    #[error("exhaustive search supports at most {max} edges, got {m}")]
    TooManyEdges { m: usize, max: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
