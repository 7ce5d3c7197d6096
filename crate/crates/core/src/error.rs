use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,

    #[error("non-positive entry {value} at position {index} (1-based)")]
    NonPositiveEntry { index: usize, value: f64 },

    #[error("non-finite entry at position {index} (1-based)")]
    NonFiniteEntry { index: usize },

    #[error("order-statistic index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("sample size {n} is not of the form (s+1)k-1 for s={s}")]
    IncompatibleSampleSize { n: usize, s: u32 },

    #[error("degenerate ratio: the two order statistics are equal")]
    DegenerateRatio,

    #[error("density vanishes (or is not finite) at the p={p} quantile")]
    DensityVanishes { p: f64 },

    #[error("sample too small: need n >= {needed}, have {n}")]
    InsufficientSample { n: usize, needed: usize },

    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
