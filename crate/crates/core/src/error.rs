use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^dagger| entry = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("eigenvalue iteration did not converge within {budget} {unit}")]
    NoConvergence { budget: usize, unit: &'static str },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("Kraus operators violate completeness (residual {residual:e})")]
    InvalidChannel { residual: f64 },

    #[error("{name} = {value} is out of range ({constraint})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("Gaussian draw degenerate after {attempts} attempts")]
    DegenerateDraw { attempts: usize },

    #[error("operator is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("state pair has trace distance below {threshold:e} after {attempts} redraws")]
    DegeneratePair { threshold: f64, attempts: usize },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid bipartition: {0}")]
    InvalidSplit(String),
}

impl Error {
    pub(crate) fn out_of_range(name: &'static str, value: f64, constraint: &'static str) -> Self {
        Error::OutOfRange {
            name,
            value,
            constraint,
        }
    }

    pub(crate) fn mismatch(expected: usize, actual: usize) -> Self {
        Error::DimensionMismatch { expected, actual }
    }
}
