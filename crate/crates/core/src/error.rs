use thiserror::Error;

/// Errors raised while reading instance or tour files.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("missing DIMENSION header")]
    MissingDimension,
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { line: usize, vertex: i64, n: usize },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("tour is not a permutation of 1..={n}: {message}")]
    NotAPermutation { n: usize, message: String },
}

/// Errors raised by graph algorithms on inputs outside their domain.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph must have at least one vertex")]
    Empty,
}

/// Precondition failures for tour moves.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("city {city} cannot be inserted after {after}")]
    InvalidInsertion { city: usize, after: usize },
}

/// Fatal solver conditions.
#[derive(Debug, Error)]
pub enum SolveError {
    #[error("soundness breach: tour of cost n on the working matrix is not a Hamiltonian cycle of the input graph")]
    Unsound,
    #[error("invalid configuration: {0}")]
    Config(String),
}
