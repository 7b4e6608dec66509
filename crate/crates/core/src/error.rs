use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// Shapes or symbol universes do not fit together.
    #[error("structural error: {0}")]
    Structural(String),
    /// A run configuration violates a precondition (step size, grid coverage, ...).
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("numerical instability: {0}")]
    NumericalInstability(String),
    /// Bosonic Fock-space truncation is too small for the requested state.
    #[error("truncation error: {0}")]
    Truncation(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
