//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("digit {digit} out of range for base {p}")]
    DigitOutOfRange { digit: u64, p: u64 },
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("precision mismatch: {0} vs {1}")]
    PrecisionMismatch(usize, usize),
    #[error("zero has no image under the real embedding")]
    ZeroHasNoImage,
    #[error("empty point set")]
    EmptyPointSet,
    #[error("schedule infeasible at level {level}: eta = {eta}")]
    ScheduleInfeasible { level: usize, eta: f64 },
    #[error("t = 1 is singular for the rescaled equation")]
    SingularPoint,
    #[error("sieve limit {0} out of supported range [2, 1000000000]")]
    LimitOutOfRange(u64),
    #[error("grid point {0} is not covered by the sieve table (limit {1})")]
    BeyondTable(u64, u64),
    #[error("{0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
