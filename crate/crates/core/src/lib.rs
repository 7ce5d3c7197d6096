//! Tail-index estimation from logarithms of ratios of central order statistics.
//!
//! For a heavy-tailed sample of size `n = (s+1)k - 1` the statistic
//! `log(X_{(ks,n)} / X_{(k,n)})`, normalized by either the harmonic-number
//! difference `H_{ks-1} - H_{k-1}` (the unbiased `Q_{k,s}`) or by `log s`
//! (the asymptotically unbiased `Q*_{k,s}`), estimates `1/alpha`, the
//! reciprocal of the index of regular variation. The crate provides:
//!
//! - the estimators with their asymptotic confidence intervals
//!   ([`estimators`]),
//! - exact finite-sample laws, moments and Chebyshev bounds under a Pareto
//!   model ([`exact_law`]),
//! - delta-method asymptotics for general tail models ([`asymptotics`]),
//! - Hill, t-Hill, Pickands and moment baselines ([`baselines`]),
//! - a deterministic, parallel Monte Carlo engine ([`montecarlo`]),
//! - the scalar kernels behind all of the above ([`special`],
//!   [`distributions`], [`order_stats`]).

pub mod asymptotics;
pub mod baselines;
pub mod distributions;
mod error;
pub mod estimators;
pub mod exact_law;
pub mod montecarlo;
pub mod order_stats;
pub mod special;

pub use error::{Error, Result};

pub use distributions::{SeedSpec, TailModel};
pub use estimators::{
    confidence_interval, log_ratio, q_estimator, ConfidenceInterval, RatioEstimate,
};
pub use exact_law::ExactLaw;
pub use order_stats::{design_indices, DesignIndices, OrderedSample};
