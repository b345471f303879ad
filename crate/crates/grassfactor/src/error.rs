use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not orthogonal (residual {0:.3e})")]
    NotOrthogonal(f64),
    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),
    #[error("iterative decomposition did not converge")]
    ConvergenceFailure,
    #[error("bad dimensions: {0}")]
    BadDimensions(String),
    #[error("basis columns are not orthonormal (residual {0:.3e})")]
    NotOrthonormal(f64),
    #[error("invalid Grassmannian point: {0}")]
    InvalidPoint(String),
    #[error("bad signature: {0}")]
    BadSignature(String),
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("matrix is not orthogonal/unitary: {0}")]
    NotStructured(String),
    #[error("matrix is not in the requested product set")]
    NotMember,
    #[error("determinant is neither +1 nor -1 (det = {0})")]
    NotSpecialOrAntiSpecial(String),
    #[error("matrix is not special orthogonal")]
    NotSpecialOrthogonal,
    #[error("matrix is not orthogonal with determinant -1")]
    NotAntiSpecial,
    #[error("matrix is not special unitary")]
    NotSpecialUnitary,
    #[error("matrix is not unitary with determinant -1")]
    NotAntiSpecialUnitary,
    #[error("determinant does not match the signature parity")]
    DeterminantMismatch,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("phases must sum to zero (sum = {0:.3e})")]
    PhaseSumNonzero(f64),
    #[error("phase system has no solution (this is a bug)")]
    NoSolutionFound,
    #[error("matrix is not symplectic (residual {0:.3e})")]
    NotSymplectic(f64),
    #[error("matrix is not of the form diag(D, D^-1)")]
    NotDiagonalSymplectic,
    #[error("input is not generic: {0}")]
    NonGeneric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
