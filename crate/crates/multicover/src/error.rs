use thiserror::Error;

use crate::instance::FeasibilityReport;

/// Crate-wide error type. Infeasibility is an error only where an operation
/// requires a feasible instance; `validate` itself reports it as data.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("infeasible instance: {0}")]
    Infeasible(FeasibilityReport),

    #[error("invalid solution: {0}")]
    InvalidSolution(String),

    #[error("ingestion failed: {0}")]
    Ingest(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("LP solve failed: {0}")]
    Lp(String),
}

pub type Result<T> = std::result::Result<T, Error>;
