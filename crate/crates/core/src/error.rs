use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    #[error("non-integrable tail: exponent {0} must exceed 1")]
    NonIntegrableTail(f64),

    /// A difference underflowed or lost all significant digits.
    #[error("precision lost: {0}")]
    Precision(String),

    #[error("fit did not converge after {iterations} iterations (best residual {residual:.3e})")]
    FitFailure {
        iterations: usize,
        residual: f64,
        best: Vec<f64>,
    },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("Matsubara sum not converging: {0}")]
    Truncation(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("coverage error: {0}")]
    Coverage(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
