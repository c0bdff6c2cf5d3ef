use thiserror::Error;

use crate::lab::CheckReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} out of range (need 2 <= m <= 2^31)")]
    Modulus(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid ring descriptor: {0}")]
    InvalidRing(String),
    #[error("descriptor mismatch: {0}")]
    Descriptor(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("size guard exceeded: {0}")]
    Guard(String),
    #[error("modulus {0} is not 2-torsion free")]
    EvenModulus(u64),
    #[error("map does not satisfy the {identity} identity")]
    Precondition {
        identity: String,
        report: Box<CheckReport>,
    },
    #[error("internal verification failed: {message}")]
    Verification {
        message: String,
        trace: Box<serde_json::Value>,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
