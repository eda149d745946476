use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid discretization or solver configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// The compressible stiffness operator was requested at nu >= 1/2.
    #[error("incompressible limit: the stiffness operator needs nu < 0.5, got {nu}")]
    Incompressible { nu: f64 },

    /// Factorization or eigensolver failure.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The compression form is non-negative on the whole discrete space.
    #[error("no destabilizing variation in the discrete space (largest pencil eigenvalue {mu_max:e})")]
    NoDestabilizing { mu_max: f64 },

    /// Input data unusable for a fit or a report.
    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
