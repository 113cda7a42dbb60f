use thiserror::Error;

/// Errors raised by covariance validation, the optimizers and the front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("{what} is not physical: smallest eigenvalue of m + i*Omega is {min_eig:.3e}")]
    NotPhysical { what: &'static str, min_eig: f64 },

    #[error("input state is not pure: det(D) = {0:.12}")]
    NotPure(f64),

    #[error("not a completely positive map: {0}")]
    InvalidCpMap(String),

    #[error("degenerate objective: alpha*beta - gamma^2 = {0:.3e}")]
    DegenerateObjective(f64),

    #[error("negative discriminant alpha*beta - gamma^2 = {0:.3e}")]
    NegativeDiscriminant(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed specification: {0}")]
    Spec(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
