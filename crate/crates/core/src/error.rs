use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("vertex index {index} out of range for {vertex_count} vertices")]
    VertexOutOfRange { index: usize, vertex_count: usize },
    #[error("edge index {index} out of range for {edge_count} edges")]
    EdgeOutOfRange { index: usize, edge_count: usize },
    #[error("header declares {declared} edges but {found} were given")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("invalid group `{text}`: {reason}")]
    InvalidGroup { text: String, reason: String },
    #[error("unknown builtin graph `{0}`")]
    UnknownBuiltin(String),
    #[error("builtin `{name}`: {reason}")]
    InvalidBuiltinParameter { name: String, reason: String },
    #[error("expected {expected} entries, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("enumeration needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("group has a free factor; exhaustive enumeration needs a finite group")]
    InfiniteGroup,
    #[error("{a} is not in the integer cone of {generators:?}")]
    ConeViolation { a: u64, generators: Vec<u64> },
    #[error("vertex {vertex} has degree {degree}, need degree below {bound}")]
    DegreeTooHigh { vertex: usize, degree: usize, bound: u64 },
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
