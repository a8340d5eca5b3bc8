use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cutoff {cutoff} is below 2; there are no primes to sieve")]
    EmptyRange { cutoff: u64 },

    #[error("cutoff {cutoff} exceeds the sieve capacity ceiling {ceiling}")]
    Capacity { cutoff: u64, ceiling: u64 },

    #[error("weight exponent must be positive, got {exponent}")]
    NonPositiveExponent { exponent: f64 },

    #[error("invalid sample grid: t_start={t_start}, t_end={t_end}, n_samples={n_samples}")]
    InvalidGrid {
        t_start: f64,
        t_end: f64,
        n_samples: usize,
    },

    #[error("phase reference requires t > 0, but the grid starts at {t_start}")]
    ThetaDomain { t_start: f64 },

    #[error("prime cutoff {cutoff} exceeds the progressive prefix ceiling {ceiling}")]
    PrefixCeiling { cutoff: u64, ceiling: u64 },

    #[error("coincidence band delta must lie in (0, pi), got {delta}")]
    DeltaOutOfRange { delta: f64 },

    #[error("integral lower bound is 2; upper bound must exceed it, got {upper}")]
    IntegralDomain { upper: f64 },

    #[error("empirical sampling needs at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("scaling fit needs at least 3 strictly increasing cutoffs of 1000 or more")]
    BadCutoffs,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}:{line}: expected a number, found {text:?}")]
    OrdinateParse {
        path: PathBuf,
        line: usize,
        text: String,
    },

    #[error("{path}:{line}: ordinates must be strictly ascending")]
    OrdinateOrder { path: PathBuf, line: usize },

    #[error("prime cache {path} is corrupt: {reason}")]
    CacheInvalid { path: PathBuf, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True when the error is a usage/validation problem rather than a runtime failure.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
