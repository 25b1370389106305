use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by front ends to map failures onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// A parameter is outside its valid domain.
    Config,
    /// The numerics cannot proceed reliably on the given grid or bracket.
    Numeric,
    /// Measurement data is insufficient or inconsistent.
    Data,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-positive input `{name}` = {value}")]
    NonPositiveInput { name: &'static str, value: f64 },

    #[error("detuning grid is not uniform (step {min_step:e} .. {max_step:e} Hz)")]
    NonUniformGrid { min_step: f64, max_step: f64 },

    #[error("detuning grid too narrow: half-span is {ratio:.2}x the spectral support (need at least {required}x)")]
    GridTooNarrow { ratio: f64, required: f64 },

    #[error("profile has kind {found:?}, expected {expected:?}")]
    WrongProfileKind {
        expected: crate::ProfileKind,
        found: crate::ProfileKind,
    },

    #[error("profile does not cover the fit window [{lo:e}, {hi:e}] Hz")]
    InsufficientCoverage { lo: f64, hi: f64 },

    #[error("only {found} samples in the fit window, need at least {required}")]
    InsufficientSamples { found: usize, required: usize },

    #[error("group index does not change sign on [{lo:e}, {hi:e}] Hz (n_g = {ng_lo}, {ng_hi})")]
    NoSignChange {
        lo: f64,
        hi: f64,
        ng_lo: f64,
        ng_hi: f64,
    },

    #[error("need at least {required} measurements, got {found}")]
    TooFewPoints { found: usize, required: usize },

    #[error("1 - n_g must decrease with pump separation: {reason}")]
    NonMonotoneData { reason: String },

    #[error("invalid measurement data: {reason}")]
    InvalidData { reason: String },

    #[error("sample rate {sample_rate:e} Hz too low for content at {max_frequency:e} Hz")]
    Undersampled {
        sample_rate: f64,
        max_frequency: f64,
    },

    #[error("records differ in sample rate, beat frequency or length")]
    RateMismatch,

    #[error("filter cutoff {cutoff:e} Hz unusable at sample rate {sample_rate:e} Hz")]
    FilterUnstable { cutoff: f64, sample_rate: f64 },

    #[error("record too short: {samples} samples, need at least {required}")]
    RecordTooShort { samples: usize, required: usize },

    #[error("least-squares fit failed: {reason}")]
    FitFailed { reason: String },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            InvalidParameter { .. } | NonPositiveInput { .. } => ErrorKind::Config,
            TooFewPoints { .. } | NonMonotoneData { .. } | InvalidData { .. } => ErrorKind::Data,
            InsufficientCoverage { .. } | InsufficientSamples { .. } => ErrorKind::Data,
            NonUniformGrid { .. }
            | GridTooNarrow { .. }
            | WrongProfileKind { .. }
            | NoSignChange { .. }
            | Undersampled { .. }
            | RateMismatch
            | FilterUnstable { .. }
            | RecordTooShort { .. }
            | FitFailed { .. } => ErrorKind::Numeric,
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Returns an error unless `value` is finite and strictly positive.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be finite and >= 0, got {value}"),
        ))
    }
}
