use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the documented range of an operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A coordinate-chart degeneracy, such as an angular covector at a pole
    /// of the Hopf chart, where the requested quantity has no finite value.
    #[error("singular coordinate: {0}")]
    SingularCoordinate(String),

    /// The requested quantity does not exist mathematically, for example a
    /// divergent integral.
    #[error("domain error: {0}")]
    Domain(String),

    /// The computation ran but its own accuracy monitor rejected the result.
    #[error("precision failure: {0}")]
    Precision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
