use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not skew-symmetric: ||A + A^T||_inf = {defect:e} exceeds {bound:e}")]
    Skewness { defect: f64, bound: f64 },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("singular system: pivot {pivot:e} in column {column} below {threshold:e}")]
    Singular {
        column: usize,
        pivot: f64,
        threshold: f64,
    },

    #[error("unknown method `{0}`")]
    UnknownMethod(String),

    #[error("inconsistent tableau: row {row}: c = {found} but row sum of A = {expected}")]
    Consistency {
        row: usize,
        expected: f64,
        found: f64,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("timestamps not strictly increasing at line {line}: {time} follows {previous}")]
    Ordering {
        line: usize,
        previous: f64,
        time: f64,
    },

    #[error("implicit stage system could not be solved: {0}")]
    StageSolve(Box<Error>),

    #[error("fixed-point stage iteration did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("initial matrix is not orthogonal: ||Q^T Q - I||_F = {defect:e} exceeds {tol:e}")]
    NonOrthogonal { defect: f64, tol: f64 },

    #[error("convergence order is indeterminate: every global error is below {floor:e}")]
    IndeterminateOrder { floor: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
