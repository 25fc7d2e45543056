use thiserror::Error;

use crate::barron::BarronError;
use crate::kernels::KernelError;
use crate::separation::SeparationError;
use crate::transport::TransportError;
use crate::widthprobe::ProbeError;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input: parameters out of range, mismatched shapes, unreadable config.
    Validation,
    /// The numerics failed: non-finite values, solver or optimizer breakdown.
    Numerical,
    /// Filesystem or serialization failure.
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Separation(#[from] SeparationError),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error(transparent)]
    Barron(#[from] BarronError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Probe(#[from] ProbeError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Separation(_) | Error::Config(_) => ErrorKind::Validation,
            Error::Transport(e) => e.kind(),
            Error::Barron(e) => e.kind(),
            Error::Kernel(e) => e.kind(),
            Error::Probe(e) => e.kind(),
            Error::Io(_) => ErrorKind::Io,
            Error::Json(_) => ErrorKind::Validation,
        }
    }
}
