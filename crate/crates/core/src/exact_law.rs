//! Exact finite-sample distribution theory under a Pareto model.
//!
//! For `X in Par(alpha, delta)` the log-ratio `log(X_{(j,n)}/X_{(i,n)})`
//! equals in distribution `-log(rho)/alpha` with `rho ~ Beta(n-j+1, j-i)`,
//! an exponential order statistic. `Q_{k,s}` and `Q*_{k,s}` are that
//! log-ratio (with `i = k`, `j = ks`, `n = (s+1)k - 1`) rescaled by the
//! harmonic-number difference or by `log s`, so their densities, CDFs,
//! moments and Chebyshev bounds all have closed forms. None of it depends
//! on `delta`.

use crate::error::{Error, Result};
use crate::special::{generalized_harmonic, harmonic, ln_gamma, reg_incomplete_beta};

/// Which statistic the law describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LawKind {
    /// `log(X_{(j,n)} / X_{(i,n)})` with `1 <= i < j <= n`.
    LogRatio { i: usize, j: usize, n: usize },
    /// `Q_{k,s}` on the implied sample size `(s+1)k - 1`.
    Q { k: usize, s: u32 },
    /// `Q*_{k,s}` on the implied sample size `(s+1)k - 1`.
    QStar { k: usize, s: u32 },
}

/// Exact law of a ratio statistic under `Par(alpha, .)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactLaw {
    kind: LawKind,
    alpha: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must be positive and finite, got {alpha}")))
    }
}

fn check_design(k: usize, s: u32) -> Result<()> {
    if k == 0 || s < 2 {
        return Err(Error::domain(format!("need k >= 1 and s >= 2, got k={k}, s={s}")));
    }
    Ok(())
}

impl ExactLaw {
    pub fn log_ratio(i: usize, j: usize, n: usize, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(1 <= i && i < j && j <= n) {
            return Err(Error::domain(format!(
                "order-statistic indices must satisfy 1 <= i < j <= n, got i={i}, j={j}, n={n}"
            )));
        }
        Ok(Self {
            kind: LawKind::LogRatio { i, j, n },
            alpha,
        })
    }

    pub fn q(k: usize, s: u32, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_design(k, s)?;
        Ok(Self {
            kind: LawKind::Q { k, s },
            alpha,
        })
    }

    pub fn q_star(k: usize, s: u32, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_design(k, s)?;
        Ok(Self {
            kind: LawKind::QStar { k, s },
            alpha,
        })
    }

    pub fn kind(&self) -> LawKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    // (i, j, n, scale): the statistic is log(X_{(j,n)}/X_{(i,n)}) / scale.
    fn canonical(&self) -> (usize, usize, usize, f64) {
        match self.kind {
            LawKind::LogRatio { i, j, n } => (i, j, n, 1.0),
            LawKind::Q { k, s } => {
                let (i, j, n) = design_triplet(k, s);
                let h = harmonic(j as u64 - 1) - harmonic(k as u64 - 1);
                (i, j, n, h)
            }
            LawKind::QStar { k, s } => {
                let (i, j, n) = design_triplet(k, s);
                (i, j, n, (s as f64).ln())
            }
        }
    }

    /// Probability density; zero for `x <= 0`.
    ///
    /// The factorial front factor is evaluated through log-gamma
    /// differences, so large `k` designs do not overflow.
    pub fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 || !x.is_finite() {
            return 0.0;
        }
        let (i, j, n, scale) = self.canonical();
        let a = self.alpha;
        let ln_front = ln_gamma((n - i + 1) as f64)
            - ln_gamma((j - i) as f64)
            - ln_gamma((n - j + 1) as f64);
        let power = (j - i - 1) as f64;
        let y = a * scale * x;
        // 1 - e^{-y} without cancellation
        let t = -(-y).exp_m1();
        let mut ln_pdf = (a * scale).ln() + ln_front - (n - j + 1) as f64 * y;
        if power > 0.0 {
            ln_pdf += power * t.ln();
        }
        ln_pdf.exp()
    }

    /// CDF from the Beta representation:
    /// `P(stat <= x) = 1 - I_{e^{-alpha scale x}}(n-j+1, j-i)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let (i, j, n, scale) = self.canonical();
        let u = (-self.alpha * scale * x).exp();
        1.0 - reg_incomplete_beta(u, (n - j + 1) as f64, (j - i) as f64)
            .expect("u in [0,1], positive shapes")
    }

    /// Exact `(mean, variance)`.
    pub fn moments(&self) -> (f64, f64) {
        let a = self.alpha;
        match self.kind {
            LawKind::LogRatio { i, j, n } => {
                let mean = (harmonic((n - i) as u64) - harmonic((n - j) as u64)) / a;
                let var = (generalized_harmonic((n - i) as u64, 2)
                    - generalized_harmonic((n - j) as u64, 2))
                    / (a * a);
                (mean, var)
            }
            LawKind::Q { k, s } => {
                let (h, h2) = harmonic_window(k, s);
                (1.0 / a, h2 / (a * a * h * h))
            }
            LawKind::QStar { k, s } => {
                let (h, h2) = harmonic_window(k, s);
                let ls = (s as f64).ln();
                (h / (a * ls), h2 / (a * a * ls * ls))
            }
        }
    }

    /// Chebyshev tail bound `P(|stat - 1/alpha| > eps) <= variance / eps^2`
    /// for the `Q` and `Q*` laws.
    ///
    /// Returned unclamped, exactly as the closed form reads; values above 1
    /// are vacuous and the caller may clamp.
    pub fn chebyshev_bound(&self, eps: f64) -> Result<f64> {
        if eps <= 0.0 || eps.is_nan() {
            return Err(Error::domain(format!("eps must be positive, got {eps}")));
        }
        match self.kind {
            LawKind::LogRatio { .. } => Err(Error::domain(
                "Chebyshev bound around 1/alpha applies to the Q and Q* laws only".to_string(),
            )),
            _ => {
                let (_, var) = self.moments();
                Ok(var / (eps * eps))
            }
        }
    }
}

fn design_triplet(k: usize, s: u32) -> (usize, usize, usize) {
    let s = s as usize;
    (k, k * s, (s + 1) * k - 1)
}

fn harmonic_window(k: usize, s: u32) -> (f64, f64) {
    let hi = (k * s as usize - 1) as u64;
    let lo = (k - 1) as u64;
    (
        harmonic(hi) - harmonic(lo),
        generalized_harmonic(hi, 2) - generalized_harmonic(lo, 2),
    )
}
