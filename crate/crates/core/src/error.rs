use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("pole of the gamma function at {0}")]
    Pole(f64),
    #[error("argument outside the domain of {what}: {value}")]
    Domain { what: &'static str, value: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("exponential overflow: |Im x|·2πα = {0} exceeds 700")]
    Overflow(f64),
    #[error("prime table limit {0} exceeds the supported maximum 2^40")]
    LimitExceeded(u64),
    #[error("prime table too small: need n up to {required}, table stops at {available}")]
    TableTooSmall { required: u64, available: u64 },
    #[error("zero set covers [{have_lo}, {have_hi}] but [{need_lo}, {need_hi}] is required")]
    Coverage {
        need_lo: f64,
        need_hi: f64,
        have_lo: f64,
        have_hi: f64,
    },
    #[error("could not separate zeros in Gram block [{lo}, {hi}]: found {found} of {expected}")]
    IncompleteDetection {
        lo: f64,
        hi: f64,
        found: usize,
        expected: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
