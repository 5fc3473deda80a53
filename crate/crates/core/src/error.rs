//! Error type shared by all modules.

use thiserror::Error;

/// Errors raised by state construction, linear algebra, and the bound pipeline.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |m - m†| element is {defect:.3e}")]
    NotHermitian { defect: f64 },

    #[error("matrix does not have unit trace: trace = {trace:.12e}")]
    NotUnitTrace { trace: f64 },

    #[error("not positive semidefinite: smallest eigenvalue {min_eigenvalue:.3e} is below -1e-10")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("state vector is not normalized: |psi|^2 = {norm_sq:.12e}")]
    NotNormalized { norm_sq: f64 },

    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid factor index set {indices:?} for {nfactors} factors")]
    InvalidFactorIndices {
        indices: Vec<usize>,
        nfactors: usize,
    },

    #[error("operation requires a bipartite state, got {nfactors} factors")]
    NotBipartite { nfactors: usize },

    #[error("matrix is not an isometry: max |V†V - I| element is {defect:.3e}")]
    NotIsometry { defect: f64 },

    #[error("unsupported pair-state input: transformed mode has |p> support {support:.3e}")]
    UnsupportedPairState { support: f64 },

    #[error("probabilities do not form a distribution: {reason}")]
    InvalidProbabilities { reason: String },

    #[error("{0}")]
    InvalidParameter(String),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
