//! Classical tail-index baselines: Hill, t-Hill, Pickands and the
//! Dekkers-Einmahl-de Haan moment estimator.
//!
//! All four estimate the extreme value index `gamma` (`gamma = 1/alpha` in
//! the heavy-tailed domain) from the top `k` order statistics, with the
//! standard literature forms:
//!
//! - Hill: `(1/k) sum_{i=1}^{k} [log X_{(n-i+1)} - log X_{(n-k)}]`
//! - t-Hill: `[(1/k) sum_{i=1}^{k} X_{(n-k)} / X_{(n-i+1)}]^{-1} - 1`
//! - Pickands: `log[(X_{(n-k+1)} - X_{(n-2k+1)}) / (X_{(n-2k+1)} - X_{(n-4k+1)})] / log 2`
//! - Moment: `M1 + 1 - (1/2) [1 - M1^2/M2]^{-1}` with
//!   `Mr = (1/k) sum_{i=1}^{k} [log X_{(n-i+1)} - log X_{(n-k)}]^r`

use crate::error::{Error, Result};
use crate::order_stats::OrderedSample;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaselineMethod {
    Hill,
    THill,
    Pickands,
    Moment,
}

impl std::fmt::Display for BaselineMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            BaselineMethod::Hill => "hill",
            BaselineMethod::THill => "thill",
            BaselineMethod::Pickands => "pickands",
            BaselineMethod::Moment => "moment",
        };
        f.write_str(name)
    }
}

/// A baseline estimate of the extreme value index.
///
/// `alpha_hat = 1/gamma_hat` is populated only when `gamma_hat > 0`; the
/// Pickands and moment estimators can legitimately return zero or negative
/// values, where no tail index is implied.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BaselineEstimate {
    pub method: BaselineMethod,
    pub k: usize,
    pub gamma_hat: f64,
    pub alpha_hat: Option<f64>,
}

impl BaselineEstimate {
    fn new(method: BaselineMethod, k: usize, gamma_hat: f64) -> Self {
        let alpha_hat = (gamma_hat > 0.0).then(|| 1.0 / gamma_hat);
        Self {
            method,
            k,
            gamma_hat,
            alpha_hat,
        }
    }
}

fn check_top_k(sample: &OrderedSample, k: usize) -> Result<()> {
    let n = sample.len();
    if k == 0 || k > n - 1 {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    Ok(())
}

// Mean of [log X_{(n-i+1)} - log anchor]^r over i = 1..k, r = 1, 2.
fn log_excess_moments(sample: &OrderedSample, k: usize) -> (f64, f64) {
    let v = sample.values();
    let n = v.len();
    let anchor = v[n - k - 1].ln();
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for i in 1..=k {
        let d = v[n - i].ln() - anchor;
        m1 += d;
        m2 += d * d;
    }
    (m1 / k as f64, m2 / k as f64)
}

/// Hill estimator on the top `k` log-excesses.
pub fn hill(sample: &OrderedSample, k: usize) -> Result<BaselineEstimate> {
    check_top_k(sample, k)?;
    let v = sample.values();
    let n = v.len();
    if v[n - k - 1] == v[n - 1] {
        // all of the top k+1 values coincide
        return Err(Error::DegenerateRatio);
    }
    let (m1, _) = log_excess_moments(sample, k);
    Ok(BaselineEstimate::new(BaselineMethod::Hill, k, m1))
}

/// t-Hill estimator; a constant top block gives `gamma_hat = 0` rather than
/// an error, since the mean ratio is still well defined.
pub fn t_hill(sample: &OrderedSample, k: usize) -> Result<BaselineEstimate> {
    check_top_k(sample, k)?;
    let v = sample.values();
    let n = v.len();
    let anchor = v[n - k - 1];
    let mut mean_ratio = 0.0;
    for i in 1..=k {
        mean_ratio += anchor / v[n - i];
    }
    mean_ratio /= k as f64;
    Ok(BaselineEstimate::new(
        BaselineMethod::THill,
        k,
        1.0 / mean_ratio - 1.0,
    ))
}

/// Pickands estimator from the `k`, `2k` and `4k` upper order statistics;
/// needs `n >= 4k` and distinct spacings.
pub fn pickands(sample: &OrderedSample, k: usize) -> Result<BaselineEstimate> {
    let n = sample.len();
    if k == 0 {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    if n < 4 * k {
        return Err(Error::InsufficientSample { n, needed: 4 * k });
    }
    let v = sample.values();
    let top = v[n - k];
    let mid = v[n - 2 * k];
    let low = v[n - 4 * k];
    let num = top - mid;
    let den = mid - low;
    if den == 0.0 || num == 0.0 {
        return Err(Error::DegenerateRatio);
    }
    Ok(BaselineEstimate::new(
        BaselineMethod::Pickands,
        k,
        (num / den).ln() / std::f64::consts::LN_2,
    ))
}

/// Dekkers-Einmahl-de Haan moment estimator.
pub fn moment_dedh(sample: &OrderedSample, k: usize) -> Result<BaselineEstimate> {
    check_top_k(sample, k)?;
    let (m1, m2) = log_excess_moments(sample, k);
    if m2 == 0.0 {
        return Err(Error::DegenerateRatio);
    }
    let denom = 1.0 - m1 * m1 / m2;
    if denom == 0.0 {
        return Err(Error::DegenerateRatio);
    }
    Ok(BaselineEstimate::new(
        BaselineMethod::Moment,
        k,
        m1 + 1.0 - 0.5 / denom,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: f64 = std::f64::consts::E;

    fn sample(values: &[f64]) -> OrderedSample {
        OrderedSample::new(values).unwrap()
    }

    #[test]
    fn hill_hand_examples() {
        let s = sample(&[1.0, E, E * E]);
        let est = hill(&s, 2).unwrap();
        assert!((est.gamma_hat - 1.5).abs() < 1e-14);
        assert!((est.alpha_hat.unwrap() - 2.0 / 3.0).abs() < 1e-14);
        // single-term mean: [1, r] with k = 1 gives log r
        let s = sample(&[1.0, 7.0]);
        assert!((hill(&s, 1).unwrap().gamma_hat - 7f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn hill_errors() {
        let s = sample(&[1.0, 2.0, 3.0]);
        assert!(matches!(hill(&s, 0), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(hill(&s, 3), Err(Error::IndexOutOfRange { .. })));
        let tied = sample(&[1.0, 5.0, 5.0, 5.0]);
        assert_eq!(hill(&tied, 2), Err(Error::DegenerateRatio));
    }

    #[test]
    fn t_hill_hand_example() {
        let s = sample(&[1.0, E, E * E]);
        let est = t_hill(&s, 2).unwrap();
        let mean_ratio = ((-2f64).exp() + (-1f64).exp()) / 2.0;
        assert!((mean_ratio - 0.2516074).abs() < 1e-7);
        assert!((est.gamma_hat - (1.0 / mean_ratio - 1.0)).abs() < 1e-14);
        assert!((est.gamma_hat - 2.9744).abs() < 1e-4);
    }

    #[test]
    fn t_hill_constant_top_block_gives_zero() {
        let s = sample(&[1.0, 5.0, 5.0, 5.0]);
        let est = t_hill(&s, 2).unwrap();
        assert_eq!(est.gamma_hat, 0.0);
        assert_eq!(est.alpha_hat, None);
    }

    #[test]
    fn pickands_hand_examples() {
        let s = sample(&[1.0, 2.0, 3.0, 5.0]);
        assert_eq!(pickands(&s, 1).unwrap().gamma_hat, 0.0);
        let s = sample(&[1.0, 2.0, 3.0, 7.0]);
        assert!((pickands(&s, 1).unwrap().gamma_hat - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pickands_location_invariance() {
        let base = [1.0, 2.5, 4.0, 9.0, 11.0, 12.5, 17.0, 30.0];
        let s0 = sample(&base);
        let g0 = pickands(&s0, 2).unwrap().gamma_hat;
        let shifted: Vec<f64> = base.iter().map(|x| x + 13.7).collect();
        let s1 = sample(&shifted);
        assert!((pickands(&s1, 2).unwrap().gamma_hat - g0).abs() < 1e-12);
    }

    #[test]
    fn pickands_errors() {
        let s = sample(&[1.0, 2.0, 3.0]);
        assert!(matches!(
            pickands(&s, 1),
            Err(Error::InsufficientSample { n: 3, needed: 4 })
        ));
        let zero_den = sample(&[1.0, 1.0, 1.0, 5.0]);
        assert_eq!(pickands(&zero_den, 1), Err(Error::DegenerateRatio));
        let zero_num = sample(&[1.0, 3.0, 3.0, 3.0]);
        assert_eq!(pickands(&zero_num, 1), Err(Error::DegenerateRatio));
    }

    #[test]
    fn moment_hand_example() {
        // M1 = 1.5, M2 = 2.5, gamma = 2.5 - 0.5/(1 - 0.9) = -2.5
        let s = sample(&[1.0, E, E * E]);
        let est = moment_dedh(&s, 2).unwrap();
        assert!((est.gamma_hat + 2.5).abs() < 1e-12);
        assert_eq!(est.alpha_hat, None);
    }

    #[test]
    fn moment_degenerate_cases() {
        // M1 = M2 = 1 makes the correction term blow up.
        let s = sample(&[1.0, E, E]);
        assert_eq!(moment_dedh(&s, 2), Err(Error::DegenerateRatio));
        let tied = sample(&[2.0, 5.0, 5.0, 5.0]);
        assert_eq!(moment_dedh(&tied, 2), Err(Error::DegenerateRatio));
    }

    #[test]
    fn scale_invariance_of_all_four() {
        let base = [0.8, 1.9, 2.2, 3.1, 4.4, 8.0, 9.5, 13.0, 21.0, 55.0];
        let s0 = sample(&base);
        let scaled: Vec<f64> = base.iter().map(|x| x * 321.5).collect();
        let s1 = sample(&scaled);
        let k = 2;
        assert!(
            (hill(&s0, k).unwrap().gamma_hat - hill(&s1, k).unwrap().gamma_hat).abs() < 1e-12
        );
        assert!(
            (t_hill(&s0, k).unwrap().gamma_hat - t_hill(&s1, k).unwrap().gamma_hat).abs() < 1e-12
        );
        assert!(
            (pickands(&s0, k).unwrap().gamma_hat - pickands(&s1, k).unwrap().gamma_hat).abs()
                < 1e-12
        );
        assert!(
            (moment_dedh(&s0, k).unwrap().gamma_hat - moment_dedh(&s1, k).unwrap().gamma_hat)
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn hill_on_exact_pareto_quantile_grid() {
        // Plug-in sanity with no randomness: X_{(i)} = (1 - i/(n+1))^{-1/alpha}.
        let n = 10_000;
        let alpha = 1.0f64;
        let grid: Vec<f64> = (1..=n)
            .map(|i| (1.0 - i as f64 / (n + 1) as f64).powf(-1.0 / alpha))
            .collect();
        let s = OrderedSample::from_sorted(grid).unwrap();
        let est = hill(&s, 1_000).unwrap();
        assert!(
            (est.gamma_hat - 1.0 / alpha).abs() < 0.1 / alpha,
            "gamma_hat = {}",
            est.gamma_hat
        );
    }
}
