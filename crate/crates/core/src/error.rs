use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid 3-tuple group {0:03b}")]
    Encoding(u8),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("exponent {value} exceeds the bound {bound}")]
    Overflow { value: i64, bound: i32 },
    #[error("torus side {side} on axis {axis} is below the admissible minimum {min}")]
    Truncation {
        axis: usize,
        side: usize,
        min: usize,
    },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("scale limit exceeded: {0}")]
    Scale(String),
    #[error("duplicate edge {0}")]
    Multiplicity(String),
    #[error("unknown built-in graph {0:?}")]
    UnknownBuiltin(String),
    #[error("graph is not bipartite: {0}")]
    NonBipartite(String),
    #[error("too many non-tree edges ({count} > {limit})")]
    CombinatorialBlowup { count: usize, limit: usize },
    #[error("orientation is incomplete: {0}")]
    IncompleteOrientation(String),
    #[error("bosonization not applicable: {0}")]
    Applicability(String),
    #[error("label assignment conflict: {0}")]
    Assignment(String),
}

pub type Result<T> = std::result::Result<T, Error>;
