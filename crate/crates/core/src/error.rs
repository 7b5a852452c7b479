use thiserror::Error;

/// Errors produced by the bound computations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("invalid weight matrix: {0}")]
    InvalidWeight(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerically singular block (condition number {condition:e})")]
    SingularBlock { condition: f64 },

    #[error("state is not strictly positive (smallest eigenvalue {min_eigenvalue:e})")]
    SingularState { min_eigenvalue: f64 },

    #[error("malformed model file: {0}")]
    FormatError(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("degenerate model: {0}")]
    DegenerateModel(String),

    #[error("degenerate case: {0}")]
    DegenerateCase(String),

    #[error("extension is not of rank-one form (second eigenvalue {second:e})")]
    NotRankOne { second: f64 },

    #[error("internal error: {0}")]
    InternalError(String),
}

impl Error {
    /// Stable variant name, used on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NumericalFailure(_) => "NumericalFailure",
            Error::InvalidWeight(_) => "InvalidWeight",
            Error::InvalidInput(_) => "InvalidInput",
            Error::SingularBlock { .. } => "SingularBlock",
            Error::SingularState { .. } => "SingularState",
            Error::FormatError(_) => "FormatError",
            Error::InvalidModel(_) => "InvalidModel",
            Error::DegenerateModel(_) => "DegenerateModel",
            Error::DegenerateCase(_) => "DegenerateCase",
            Error::NotRankOne { .. } => "NotRankOne",
            Error::InternalError(_) => "InternalError",
        }
    }

    /// True for errors caused by the caller's input rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidWeight(_)
                | Error::InvalidInput(_)
                | Error::SingularState { .. }
                | Error::FormatError(_)
                | Error::InvalidModel(_)
                | Error::DegenerateModel(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
