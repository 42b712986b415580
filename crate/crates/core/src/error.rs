use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("modulus {0} is not an odd integer in [3, 2^63)")]
    InvalidModulus(u64),

    #[error("Jacobi symbol requires an odd positive lower argument, got {0}")]
    EvenJacobiModulus(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid range [{low}, {high})")]
    InvalidRange { low: u64, high: u64 },

    #[error("segment width {0} is below the minimum of 1024")]
    SegmentWidthTooSmall(u64),

    #[error("scan kind set is empty or contains duplicates")]
    BadKindSet,

    #[error("checkpoint does not match the requested scan: {0}")]
    CheckpointMismatch(String),

    #[error("malformed {what} at {path}: {detail}")]
    MalformedFile {
        what: &'static str,
        path: PathBuf,
        detail: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("argument {name}={value} outside supported domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: String,
        domain: &'static str,
    },

    #[error("bound is only valid for p >= 10^20 and H <= 2 p^(1/2 + 1/(4r))")]
    OutsideValidity,

    #[error("sieving-prime density too high: delta <= 0 for n={n}, s={s}")]
    DeltaNotPositive { n: u32, s: u32 },

    #[error("comparison of {lhs} and {rhs} falls inside the 1e-9 safety margin")]
    Indeterminate { lhs: f64, rhs: f64 },

    #[error("fixed-point iteration did not converge within {0} steps")]
    NonConvergence(u32),

    #[error("{0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
