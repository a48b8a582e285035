use std::path::PathBuf;

use thiserror::Error;

use crate::symfun::Caps;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition {0:?}: parts must be positive and nonincreasing")]
    InvalidPartition(Vec<u32>),

    #[error("cannot pad {lambda:?} to {n}: need n >= |λ| + λ₁")]
    PadOutOfRange { lambda: Vec<u32>, n: u32 },

    #[error("truncation caps differ: {left:?} vs {right:?}")]
    CapMismatch { left: Caps, right: Caps },

    #[error("operation {op} not defined in basis {basis}")]
    WrongBasis { op: &'static str, basis: &'static str },

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),

    #[error("input must be homogeneous in x-degree")]
    NotHomogeneous,

    #[error("series has a nonzero constant term")]
    ConstantTerm,

    #[error("series must have constant term 1")]
    ConstantTermNotOne,

    #[error("truncation ({n}, {k}) exceeds caps {caps:?}")]
    TruncationOutOfRange { n: u32, k: u32, caps: Caps },

    /// An integrality assertion failed. Always an engine bug, never data.
    #[error("non-integral coefficient {value} at {location}")]
    NonIntegral { location: String, value: String },

    /// Division by (1+t) left a remainder. Always an engine bug, never data.
    #[error("inexact division by (1+t) at {location}: remainder {remainder}")]
    InexactDivision { location: String, remainder: String },

    /// Two independent routes disagree. Always an engine bug, never data.
    #[error("cross-check failed: {0}")]
    Mismatch(String),

    #[error("tree oracle is limited to n <= {max}, requested {n}")]
    OracleTooLarge { n: u32, max: u32 },

    #[error("bad argument: {0}")]
    InvalidArgument(String),

    #[error("cache file {path} unusable: {reason}")]
    CacheCorrupt { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors meaning the engine contradicted itself.
    pub fn is_inconsistency(&self) -> bool {
        matches!(
            self,
            Error::NonIntegral { .. } | Error::InexactDivision { .. } | Error::Mismatch(_)
        )
    }
}
