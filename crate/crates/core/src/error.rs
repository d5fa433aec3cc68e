use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// The input lies outside the domain where a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// An enumeration or search exceeded its budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// A matrix that must be positive semidefinite is not.
    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} below floor {floor:e}")]
    NotPsd { eigenvalue: f64, floor: f64 },
    /// A stratum generator could not realise the requested partition.
    #[error("construction failed: {0}")]
    Construction(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
