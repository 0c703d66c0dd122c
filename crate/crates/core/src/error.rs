use thiserror::Error;

/// Errors raised across the decoding library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {context} (expected {expected}, got {actual})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("syndrome {0} is not reachable from the given check matrix")]
    InconsistentSyndrome(String),

    #[error("symplectic vector must have even length, got {0}")]
    OddLength(usize),

    #[error("check rows {0} and {1} anticommute")]
    NotSelfOrthogonal(usize, usize),

    #[error("register of {m} qubits exceeds the cap of {cap}")]
    CapExceeded { m: usize, cap: usize },

    #[error("invalid penalty parameters: alpha={alpha}, eta={eta} (both must be positive integers)")]
    InvalidPenalty { alpha: u32, eta: u32 },

    #[error("invalid channel parameter: {0}")]
    InvalidChannel(String),

    #[error("KL divergence undefined: Q({index}) = 0 where P > 0")]
    NotAbsolutelyContinuous { index: usize },

    #[error("no archived angles for syndrome {0}")]
    MissingAngles(String),

    #[error("estimate and true error have different syndromes")]
    SyndromeMismatch,

    #[error("invalid code definition: {0}")]
    InvalidCode(String),

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown catalog code `{0}`")]
    UnknownCode(String),

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(context: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            actual,
        })
    }
}
