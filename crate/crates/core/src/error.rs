use thiserror::Error;

/// Errors raised by constructions and verifiers.
///
/// A failed axiom is never an `Error`: verifiers return an [`AxiomReport`](crate::report::AxiomReport)
/// with witnesses instead. Errors are reserved for malformed input, unsupported cases and guards.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("argument error: {0}")]
    Argument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed structure: {0}")]
    Structure(String),
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("refused: {0}")]
    Refused(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
