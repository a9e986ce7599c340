use thiserror::Error;

use crate::estimators::EstimatorId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("column {column} has zero variance")]
    DegenerateColumn { column: usize },

    #[error("matrix is singular (smallest eigenvalue {lambda_min:e})")]
    Singular { lambda_min: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("estimator {estimator}: canonical coefficient {index} is zero")]
    DegenerateCoefficient {
        estimator: EstimatorId,
        index: usize,
    },

    #[error("estimator {estimator}: estimated error variance must be positive (got {sigma2:e})")]
    NonPositiveVariance { estimator: EstimatorId, sigma2: f64 },

    #[error("optimal k undefined: alpha[{index}] is zero")]
    ZeroCoefficient { index: usize },

    #[error("unknown estimator '{0}'")]
    UnknownEstimator(String),

    #[error("{source_name}: line {line}, column {column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("cell {index} (rho={rho}, n={n}, p={p}, sigma2={sigma2}): {source}")]
    Cell {
        index: usize,
        rho: f64,
        n: usize,
        p: usize,
        sigma2: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for failures of the numerical kernels, as opposed to bad input data.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NoConvergence { .. }
            | Error::Singular { .. }
            | Error::NotPositiveDefinite
            | Error::DegenerateCoefficient { .. }
            | Error::NonPositiveVariance { .. }
            | Error::ZeroCoefficient { .. } => true,
            Error::Cell { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
