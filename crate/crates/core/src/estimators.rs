//! The log-ratio statistics `Q_{k,s}` and `Q*_{k,s}` and their asymptotic
//! confidence interval for the tail index.
//!
//! On a sample of size `n = (s+1)k - 1` with log-ratio
//! `L = log(X_{(ks,n)} / X_{(k,n)})`:
//!
//! - `Q = L / (H_{ks-1} - H_{k-1})` is exactly unbiased for `1/alpha`
//!   under a Pareto model,
//! - `Q* = L / log s` is asymptotically unbiased, and `alpha_hat = 1/Q*`
//!   estimates the tail index itself.
//!
//! Natural logarithms throughout. All quantities are invariant under
//! rescaling of the data, so the Pareto scale never matters.

use crate::error::{Error, Result};
use crate::order_stats::{design_indices, OrderedSample};
use crate::special::{harmonic, std_normal_quantile};

/// A point estimate from one `(k, s)` design.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioEstimate {
    pub k: usize,
    pub s: u32,
    /// Sample size `(s+1)k - 1`.
    pub n: usize,
    /// `log(X_{(ks,n)} / X_{(k,n)})`.
    pub log_ratio: f64,
    /// `Q_{k,s}`: log-ratio over `H_{ks-1} - H_{k-1}`, unbiased for `1/alpha`.
    pub q: f64,
    /// `Q*_{k,s}`: log-ratio over `log s`.
    pub q_star: f64,
    /// `1/Q*`, the tail-index estimate.
    pub alpha_hat: f64,
}

impl RatioEstimate {
    /// `1/Q`. Note the unbiasedness is for `Q` as an estimator of
    /// `1/alpha`, not for this reciprocal as an estimator of `alpha`.
    pub fn inv_q(&self) -> f64 {
        1.0 / self.q
    }
}

/// Two-sided asymptotic confidence interval for `alpha`, symmetric about
/// `alpha_hat = log(s) / log_ratio`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub k: usize,
    pub s: u32,
    pub n: usize,
}

impl ConfidenceInterval {
    /// Builds the interval straight from a positive log-ratio `L`:
    /// center `log(s)/L`, half-width `(z_{1-a/2}/L) sqrt((s^2-1)/(s n))`.
    pub fn from_log_ratio(log_ratio: f64, k: usize, s: u32, level: f64) -> Result<Self> {
        if s < 2 || k == 0 {
            return Err(Error::domain(format!("need k >= 1 and s >= 2, got k={k}, s={s}")));
        }
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::domain(format!(
                "confidence level must lie in (0,1), got {level}"
            )));
        }
        if log_ratio <= 0.0 {
            return Err(Error::DegenerateRatio);
        }
        let n = (s as usize + 1) * k - 1;
        let sf = s as f64;
        let z = std_normal_quantile(1.0 - (1.0 - level) / 2.0)?;
        let center = sf.ln() / log_ratio;
        let half_width = z / log_ratio * ((sf * sf - 1.0) / (sf * n as f64)).sqrt();
        Ok(Self {
            lower: center - half_width,
            upper: center + half_width,
            level,
            k,
            s,
            n,
        })
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }

    pub fn contains(&self, alpha: f64) -> bool {
        self.lower <= alpha && alpha <= self.upper
    }
}

// Shared by the estimators and the Monte Carlo engine so both produce
// bit-identical values from the same order statistics.
pub(crate) fn raw_log_ratio(lower: f64, upper: f64) -> Result<f64> {
    if upper == lower {
        return Err(Error::DegenerateRatio);
    }
    Ok((upper / lower).ln())
}

fn checked_design(sample: &OrderedSample, k: usize, s: u32) -> Result<()> {
    let d = design_indices(sample.len(), s)?;
    if d.k != k {
        return Err(Error::IncompatibleSampleSize {
            n: sample.len(),
            s,
        });
    }
    Ok(())
}

/// `log(X_{(ks,n)} / X_{(k,n)})` for a sample of size `n = (s+1)k - 1`.
pub fn log_ratio(sample: &OrderedSample, k: usize, s: u32) -> Result<f64> {
    checked_design(sample, k, s)?;
    let lower = sample.order_stat(k)?;
    let upper = sample.order_stat(k * s as usize)?;
    raw_log_ratio(lower, upper)
}

/// Computes `Q`, `Q*` and `alpha_hat` for one design.
pub fn q_estimator(sample: &OrderedSample, k: usize, s: u32) -> Result<RatioEstimate> {
    let lr = log_ratio(sample, k, s)?;
    let denom = harmonic((k * s as usize - 1) as u64) - harmonic(k as u64 - 1);
    let q_star = lr / (s as f64).ln();
    Ok(RatioEstimate {
        k,
        s,
        n: sample.len(),
        log_ratio: lr,
        q: lr / denom,
        q_star,
        alpha_hat: 1.0 / q_star,
    })
}

/// Asymptotic confidence interval for `alpha` at the given level.
pub fn confidence_interval(
    sample: &OrderedSample,
    k: usize,
    s: u32,
    level: f64,
) -> Result<ConfidenceInterval> {
    let lr = log_ratio(sample, k, s)?;
    ConfidenceInterval::from_log_ratio(lr, k, s, level)
}
