use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DsffError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numeric integrity failure: {0}")]
    Integrity(String),
    #[error("QR iteration did not converge after {sweeps} sweeps ({deflated} of {n} eigenvalues deflated)")]
    Convergence {
        sweeps: usize,
        deflated: usize,
        n: usize,
        /// Eigenvalues deflated before the failure, in deflation order.
        partial: Vec<Complex64>,
    },
}

pub type Result<T> = std::result::Result<T, DsffError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(DsffError::Domain(msg.into()))
}
