//! Error type for the library.

use thiserror::Error;

/// Failures reported by the simulation and analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Pauli word `{0}`")]
    InvalidPauliWord(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitMismatch(usize, usize),
    #[error("operator is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("degenerate lattice: {0}")]
    DegenerateLattice(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("expansion order {0} is not supported (maximum is 2)")]
    UnsupportedOrder(usize),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("did not converge: {0}")]
    NonConvergence(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
