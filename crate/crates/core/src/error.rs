use thiserror::Error;

use crate::groupoid::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group `{name}`: {reason}")]
    InvalidGroup { name: String, reason: String },
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(ValidationReport),
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("not a group action: {0}")]
    NotAnAction(String),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("functors do not share a codomain")]
    MismatchedBase,
    #[error("size cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: usize,
        cap: usize,
    },
    #[error("inclusion of edge `{edge}` into `{vertex}` is not injective")]
    NonInjectiveInclusion { edge: String, vertex: String },
    #[error("unknown group `{0}`")]
    UnknownGroupRef(String),
    #[error("invalid graph of groups: {0}")]
    InvalidGraph(String),
    #[error("underlying graph is disconnected: vertex `{0}` is unreachable from the basepoint")]
    DisconnectedGraph(String),
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("ball of radius {radius} exceeds the cap of {cap} vertices")]
    BallTooLarge { radius: usize, cap: usize },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },
    #[error("validation error at {location}: {message}")]
    Validation { location: String, message: String },
    #[error("unsupported document kind `{0}`")]
    UnsupportedKind(String),
}

impl Error {
    pub(crate) fn invalid_group(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidGroup {
            name: name.to_string(),
            reason: reason.into(),
        }
    }
}
