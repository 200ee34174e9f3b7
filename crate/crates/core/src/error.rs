use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar or eigenvalue fell outside the domain of the function applied to it.
    #[error("domain error in {context}: value {value} violates {requirement}")]
    Domain {
        context: String,
        value: f64,
        requirement: String,
    },

    #[error("{operand} is not positive definite (smallest eigenvalue {min_eigenvalue})")]
    NotPositiveDefinite { operand: String, min_eigenvalue: f64 },

    #[error("matrix is not Hermitian: |M[{row}][{col}] - conj(M[{col}][{row}])| = {deviation}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("exponent p = {0} is outside the supported windows (-1,0), (0,1), (1,2)")]
    UnsupportedExponent(f64),

    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),

    #[error("parameters (q = {q}, r = {r}) are outside regime {regime}: {table}")]
    Regime {
        q: f64,
        r: f64,
        regime: String,
        table: String,
    },

    #[error("quadrature did not reach tolerance {tolerance} (estimated error {est_error})")]
    Accuracy { est_error: f64, tolerance: f64 },

    #[error("inconsistent evaluation: {0}")]
    Inconsistent(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn domain(context: impl Into<String>, value: f64, requirement: impl Into<String>) -> Self {
        Error::Domain {
            context: context.into(),
            value,
            requirement: requirement.into(),
        }
    }
}
