use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: String, got: String },

    #[error("matrix entry is not finite")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("Bloch vector norm {norm} exceeds 1")]
    BlochOutOfBall { norm: f64 },

    #[error("channel parameter p = {0} outside [0, 1]")]
    POutOfRange(f64),

    #[error("relaxation time must be positive, got {0}")]
    NonPositiveT(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown figure fixture `{0}`")]
    UnknownFixture(String),
}

impl Error {
    pub(crate) fn dims(expected: impl Into<String>, got: impl Into<String>) -> Self {
        Error::DimMismatch {
            expected: expected.into(),
            got: got.into(),
        }
    }
}
