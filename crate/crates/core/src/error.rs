use thiserror::Error;

/// Everything that can go wrong in the library. Vertex indices carried in
/// variants are 0-based; front ends translate them for display.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("vertex index {index} out of range for {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },
    #[error("edge at vertex {vertex} is a loop")]
    LoopEdge { vertex: usize },
    #[error("edge {i}-{j} has nonpositive weight {weight}")]
    NonpositiveWeight { i: usize, j: usize, weight: String },
    #[error("edge {i}-{j} given more than once")]
    DuplicateEdge { i: usize, j: usize },
    #[error("graph is disconnected (vertex {unreachable} unreachable from vertex 0)")]
    Disconnected { unreachable: usize },
    #[error("expected {expected} coordinates, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("reduced matrix P_{k} is singular")]
    SingularMatrix { k: usize },
    #[error("graph has non-integral edge weights")]
    NonIntegralWeights,
    #[error("divisor has non-integral coordinates")]
    NonIntegralDivisor,
    #[error("scale factor must be positive, got {0}")]
    NonpositiveScale(String),
    #[error("scale factor {0} does not clear all denominators")]
    NotAnIntegralScale(String),
    #[error("coordinate {vertex} is negative away from q")]
    NegativeAwayFromQ { vertex: usize },
    #[error("divisor has negative degree")]
    NegativeDegree,
    #[error("instance too large for brute force: {0}")]
    InstanceTooLarge(String),
    #[error("integer overflow converting {0} to machine width")]
    Overflow(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
