use thiserror::Error;

/// Error type shared by every module of the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An integrand returned NaN or infinity at a quadrature node.
    #[error("non-finite value {value} at node {index} ({coords:?})")]
    NonFinite {
        index: usize,
        coords: Vec<f64>,
        value: f64,
    },

    #[error("empty body: {0}")]
    EmptyBody(String),

    #[error("unsupported body: {0}")]
    UnsupportedBody(String),

    /// An iterative solver hit its iteration cap before reaching tolerance.
    #[error("no convergence in {context} (residual {residual:.3e})")]
    Convergence { context: String, residual: f64 },

    #[error("geometry error: {0}")]
    Geometry(String),
}

pub type Result<T> = std::result::Result<T, Error>;
