use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Invalid configuration or schema content.
    #[error("configuration error: {0}")]
    Config(String),
    /// A series, quadrature or extrapolation that failed its own convergence test.
    #[error("no convergence: {0}")]
    NonConvergence(String),
}
