//! Delta-method asymptotics for the log-ratio of the two central order
//! statistics at probabilities `1/(s+1)` and `s/(s+1)`.
//!
//! `quantile_covariance` is the asymptotic (per-sqrt(n)) covariance of the
//! bivariate empirical quantiles; `delta_method_variance` pushes it through the
//! Jacobian of `(x, y) -> log(y/x)` to get the limit variance `V` of
//! `T_{k,s} = sqrt(n) [log-ratio - log(F^{-1}(s/(s+1)) / F^{-1}(1/(s+1)))]`.
//! For a Pareto model `V` collapses to `(s^2-1)/(s alpha^2)` independently
//! of scale.

use crate::distributions::TailModel;
use crate::error::{Error, Result};

/// Asymptotic covariance matrix `D` of the two central empirical quantiles,
/// in per-sqrt(n) normalization; finite-`n` users divide by `n` themselves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuantileCovariance {
    pub p1: f64,
    pub p2: f64,
    pub d11: f64,
    pub d12: f64,
    pub d22: f64,
}

impl QuantileCovariance {
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.d11, self.d12], [self.d12, self.d22]]
    }

    pub fn correlation(&self) -> f64 {
        self.d12 / (self.d11 * self.d22).sqrt()
    }
}

/// The delta-method variance `V` together with its ingredients
/// `a = F^{-1}(1/(s+1)) f(F^{-1}(1/(s+1)))` and
/// `b = F^{-1}(s/(s+1)) f(F^{-1}(s/(s+1)))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticVariance {
    pub s: u32,
    pub a: f64,
    pub b: f64,
    pub v: f64,
    pub model: TailModel,
}

/// Limit variances of the three statistics under `Par(alpha, .)`:
/// the raw log-ratio, `Q` (after its normalization) and `Q*`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParetoLimitVariances {
    pub log_ratio: f64,
    pub q: f64,
    pub q_star: f64,
}

fn design_probabilities(s: u32) -> Result<(f64, f64)> {
    if s < 2 {
        return Err(Error::domain(format!("s must be >= 2, got {s}")));
    }
    let sf = s as f64;
    Ok((1.0 / (sf + 1.0), sf / (sf + 1.0)))
}

// Densities are evaluated analytically at the two quantiles; `V` is
// sensitive to them, so no numeric differentiation here.
fn density_at_quantile(model: &TailModel, p: f64) -> Result<f64> {
    let q = model.quantile(p)?;
    let f = model.density(q);
    if f > 0.0 && f.is_finite() {
        Ok(f)
    } else {
        Err(Error::DensityVanishes { p })
    }
}

/// Covariance matrix `D` of the two central empirical quantiles:
/// `D11 = s / ((s+1)^2 f1^2)`, `D22 = s / ((s+1)^2 f2^2)`,
/// `D12 = 1 / ((s+1)^2 f1 f2)`.
pub fn quantile_covariance(model: &TailModel, s: u32) -> Result<QuantileCovariance> {
    let (p1, p2) = design_probabilities(s)?;
    let f1 = density_at_quantile(model, p1)?;
    let f2 = density_at_quantile(model, p2)?;
    let sf = s as f64;
    let norm = (sf + 1.0) * (sf + 1.0);
    Ok(QuantileCovariance {
        p1,
        p2,
        d11: sf / (norm * f1 * f1),
        d12: 1.0 / (norm * f1 * f2),
        d22: sf / (norm * f2 * f2),
    })
}

/// `V = (1/(s+1)^2) (s/a^2 - 2/(ab) + s/b^2)` with `a`, `b` as above.
pub fn delta_method_variance(model: &TailModel, s: u32) -> Result<AsymptoticVariance> {
    let (p1, p2) = design_probabilities(s)?;
    let q1 = model.quantile(p1)?;
    let q2 = model.quantile(p2)?;
    let f1 = density_at_quantile(model, p1)?;
    let f2 = density_at_quantile(model, p2)?;
    let a = q1 * f1;
    let b = q2 * f2;
    let sf = s as f64;
    let v = (sf / (a * a) - 2.0 / (a * b) + sf / (b * b)) / ((sf + 1.0) * (sf + 1.0));
    Ok(AsymptoticVariance {
        s,
        a,
        b,
        v,
        model: *model,
    })
}

/// Centering of `T_{k,s}`: `log(F^{-1}(s/(s+1)) / F^{-1}(1/(s+1)))`.
pub fn log_quantile_ratio(model: &TailModel, s: u32) -> Result<f64> {
    let (p1, p2) = design_probabilities(s)?;
    Ok((model.quantile(p2)? / model.quantile(p1)?).ln())
}

/// `((s^2-1)/(s alpha^2), (s^2-1)/s, (s^2-1)/(s log^2 s))`.
pub fn pareto_limit_variances(s: u32, alpha: f64) -> Result<ParetoLimitVariances> {
    if s < 2 {
        return Err(Error::domain(format!("s must be >= 2, got {s}")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain(format!(
            "alpha must be positive and finite, got {alpha}"
        )));
    }
    let sf = s as f64;
    let base = (sf * sf - 1.0) / sf;
    let ls = sf.ln();
    Ok(ParetoLimitVariances {
        log_ratio: base / (alpha * alpha),
        q: base,
        q_star: base / (ls * ls),
    })
}
