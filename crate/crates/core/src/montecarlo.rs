//! Deterministic, parallel replication engine.
//!
//! Replicate `r` always draws from stream `r` of the plan's master seed and
//! aggregation runs in replicate order, so results are bit-identical for
//! any thread count. Within a replicate, one sample of maximal size is
//! drawn and every smaller `k` design is evaluated on the re-sorted prefix
//! of size `(s+1)k - 1`; the baselines see the full sorted sample with `k`
//! upper order statistics. Per-replicate estimator failures (degenerate
//! ratios, out-of-range designs) are recorded as missing cells and never
//! abort the grid.

use rayon::prelude::*;

use crate::baselines::{hill, moment_dedh, pickands, t_hill};
use crate::distributions::{SeedSpec, TailModel};
use crate::error::{Error, Result};
use crate::estimators::{raw_log_ratio, ConfidenceInterval};
use crate::order_stats::OrderedSample;
use crate::special::{kolmogorov_sf, CompensatedSum, HarmonicTable};

/// The estimators the engine can evaluate. All of them target the extreme
/// value index `gamma = 1/alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EstimatorKind {
    Q,
    QStar,
    Hill,
    THill,
    Pickands,
    Moment,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 6] = [
        EstimatorKind::Q,
        EstimatorKind::QStar,
        EstimatorKind::Hill,
        EstimatorKind::THill,
        EstimatorKind::Pickands,
        EstimatorKind::Moment,
    ];

    fn is_ratio(self) -> bool {
        matches!(self, EstimatorKind::Q | EstimatorKind::QStar)
    }
}

impl std::fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            EstimatorKind::Q => "q",
            EstimatorKind::QStar => "qstar",
            EstimatorKind::Hill => "hill",
            EstimatorKind::THill => "thill",
            EstimatorKind::Pickands => "pickands",
            EstimatorKind::Moment => "moment",
        };
        f.write_str(name)
    }
}

impl std::str::FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "q" => Ok(EstimatorKind::Q),
            "qstar" | "q*" | "q_star" => Ok(EstimatorKind::QStar),
            "hill" => Ok(EstimatorKind::Hill),
            "thill" | "t-hill" | "t_hill" => Ok(EstimatorKind::THill),
            "pickands" => Ok(EstimatorKind::Pickands),
            "moment" | "dedh" => Ok(EstimatorKind::Moment),
            other => Err(Error::domain(format!("unknown estimator '{other}'"))),
        }
    }
}

/// Grid configuration for one simulation run.
#[derive(Clone, Debug)]
pub struct ExperimentPlan {
    pub model: TailModel,
    pub s_list: Vec<u32>,
    pub k_max: usize,
    pub replicates: usize,
    pub level: f64,
    pub master_seed: u64,
    pub estimators: Vec<EstimatorKind>,
    /// Keep the per-replicate raw estimates in the result.
    pub retain_estimates: bool,
}

impl ExperimentPlan {
    fn validate(&self) -> Result<()> {
        if self.s_list.is_empty() {
            return Err(Error::domain("plan needs at least one s".to_string()));
        }
        if self.s_list.iter().any(|&s| s < 2) {
            return Err(Error::domain("every s must be >= 2".to_string()));
        }
        if self.k_max == 0 {
            return Err(Error::domain("k_max must be >= 1".to_string()));
        }
        if self.replicates == 0 {
            return Err(Error::domain("replicates must be >= 1".to_string()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::domain(format!(
                "confidence level must lie in (0,1), got {}",
                self.level
            )));
        }
        if self.estimators.is_empty() {
            return Err(Error::domain("plan needs at least one estimator".to_string()));
        }
        Ok(())
    }
}

/// Aggregates for one `(s, k, estimator)` cell.
///
/// `variance` uses the 1/m normalization so that
/// `rmse^2 = bias^2 + variance` holds as an identity. `bias`, `rmse` and
/// `coverage` are present only when the model has a known tail index
/// (`coverage` additionally only for `Q*`, whose interval is defined).
#[derive(Clone, Copy, Debug)]
pub struct CellStats {
    pub estimator: EstimatorKind,
    pub s: u32,
    pub k: usize,
    /// Design size: `(s+1)k - 1` for the ratio estimators, the full sample
    /// size for the baselines.
    pub n_design: usize,
    pub valid: usize,
    pub failed: usize,
    pub mean: f64,
    pub variance: f64,
    pub bias: Option<f64>,
    pub rmse: Option<f64>,
    pub coverage: Option<f64>,
}

/// Result of [`run_plan`]: cells ordered by `(s, k, estimator)` following
/// the plan's own ordering.
#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub plan: ExperimentPlan,
    pub cells: Vec<CellStats>,
    /// Replicate-major raw estimates (one row per replicate per `s`,
    /// `k_max * estimators.len()` values each), kept when requested.
    pub raw_estimates: Option<Vec<Vec<f64>>>,
}

impl ExperimentResult {
    pub fn cell(&self, s: u32, k: usize, estimator: EstimatorKind) -> Option<&CellStats> {
        self.cells
            .iter()
            .find(|c| c.s == s && c.k == k && c.estimator == estimator)
    }

    /// Per `(s, estimator)`, the cell with the smallest RMSE (smallest `k`
    /// on ties); the oracle-best-`k` summary of a comparison run.
    pub fn best_k_cells(&self) -> Vec<CellStats> {
        let mut out = Vec::new();
        for &s in &self.plan.s_list {
            for &est in &self.plan.estimators {
                let best = self
                    .cells
                    .iter()
                    .filter(|c| c.s == s && c.estimator == est && c.valid > 0)
                    .filter(|c| c.rmse.map(f64::is_finite).unwrap_or(false))
                    .min_by(|a, b| {
                        let ra = a.rmse.unwrap();
                        let rb = b.rmse.unwrap();
                        ra.partial_cmp(&rb)
                            .unwrap()
                            .then_with(|| a.k.cmp(&b.k))
                    });
                if let Some(c) = best {
                    out.push(*c);
                }
            }
        }
        out
    }
}

const COVER_NA: u8 = 2;

struct ReplicateRow {
    values: Vec<f64>,
    covered: Vec<u8>,
}

fn sorted_insert(vec: &mut Vec<f64>, x: f64) {
    let pos = vec.partition_point(|&v| v <= x);
    vec.insert(pos, x);
}

fn run_replicate(
    plan: &ExperimentPlan,
    s: u32,
    rep: usize,
    harmonics: &HarmonicTable,
    gamma_truth: Option<f64>,
) -> ReplicateRow {
    let n_est = plan.estimators.len();
    let k_max = plan.k_max;
    let su = s as usize;
    let n_max = (su + 1) * k_max - 1;
    let ln_s = (s as f64).ln();
    let needs_ratio = plan.estimators.iter().any(|e| e.is_ratio());
    let needs_baselines = plan.estimators.iter().any(|e| !e.is_ratio());

    let raw = plan
        .model
        .sample(n_max, SeedSpec::new(plan.master_seed, rep as u64));

    let mut values = vec![f64::NAN; k_max * n_est];
    let mut covered = vec![COVER_NA; k_max * n_est];

    let mut sorted: Vec<f64> = Vec::with_capacity(n_max);
    let mut drawn = 0usize;
    for k in 1..=k_max {
        let n_k = (su + 1) * k - 1;
        while drawn < n_k {
            sorted_insert(&mut sorted, raw[drawn]);
            drawn += 1;
        }
        if !needs_ratio {
            continue;
        }
        let base = (k - 1) * n_est;
        if let Ok(lr) = raw_log_ratio(sorted[k - 1], sorted[k * su - 1]) {
            for (e, &est) in plan.estimators.iter().enumerate() {
                match est {
                    EstimatorKind::Q => {
                        values[base + e] = lr / harmonics.range_diff(k * su - 1, k - 1);
                    }
                    EstimatorKind::QStar => {
                        values[base + e] = lr / ln_s;
                        if let Some(gamma) = gamma_truth {
                            let ci =
                                ConfidenceInterval::from_log_ratio(lr, k, s, plan.level)
                                    .expect("positive log-ratio, valid design");
                            covered[base + e] = u8::from(ci.contains(1.0 / gamma));
                        }
                    }
                    _ => {}
                }
            }
        }
    }

    if needs_baselines {
        let full = OrderedSample::from_sorted(sorted)
            .expect("model draws are positive and the prefix buffer is sorted");
        for k in 1..=k_max {
            let base = (k - 1) * n_est;
            for (e, &est) in plan.estimators.iter().enumerate() {
                let outcome = match est {
                    EstimatorKind::Hill => hill(&full, k),
                    EstimatorKind::THill => t_hill(&full, k),
                    EstimatorKind::Pickands => pickands(&full, k),
                    EstimatorKind::Moment => moment_dedh(&full, k),
                    _ => continue,
                };
                if let Ok(b) = outcome {
                    values[base + e] = b.gamma_hat;
                }
            }
        }
    }

    ReplicateRow { values, covered }
}

/// Runs the full `(s, k, estimator)` grid of the plan.
///
/// Deterministic for a fixed `master_seed` under any thread count: streams
/// are indexed by replicate and aggregation is sequential in replicate
/// order, with compensated summation.
pub fn run_plan(plan: &ExperimentPlan) -> Result<ExperimentResult> {
    plan.validate()?;
    let n_est = plan.estimators.len();
    let k_max = plan.k_max;
    let gamma_truth = plan.model.tail_index().map(|a| 1.0 / a);

    let mut cells = Vec::with_capacity(plan.s_list.len() * k_max * n_est);
    let mut raw_kept: Vec<Vec<f64>> = Vec::new();

    for &s in &plan.s_list {
        let harmonics = HarmonicTable::new(k_max * s as usize, 1);
        let rows: Vec<ReplicateRow> = (0..plan.replicates)
            .into_par_iter()
            .map(|rep| run_replicate(plan, s, rep, &harmonics, gamma_truth))
            .collect();

        let su = s as usize;
        for k in 1..=k_max {
            for (e, &est) in plan.estimators.iter().enumerate() {
                let idx = (k - 1) * n_est + e;
                let mut sum = CompensatedSum::new();
                let mut valid = 0usize;
                for row in &rows {
                    let v = row.values[idx];
                    if v.is_finite() {
                        sum.add(v);
                        valid += 1;
                    }
                }
                let mean = if valid > 0 {
                    sum.total() / valid as f64
                } else {
                    f64::NAN
                };
                let mut sq = CompensatedSum::new();
                for row in &rows {
                    let v = row.values[idx];
                    if v.is_finite() {
                        let d = v - mean;
                        sq.add(d * d);
                    }
                }
                let variance = if valid > 0 {
                    sq.total() / valid as f64
                } else {
                    f64::NAN
                };
                let bias = gamma_truth
                    .filter(|_| valid > 0)
                    .map(|gamma| mean - gamma);
                let rmse = bias.map(|b| (b * b + variance).sqrt());
                let coverage = if est == EstimatorKind::QStar && gamma_truth.is_some() {
                    let mut hits = 0usize;
                    let mut defined = 0usize;
                    for row in &rows {
                        match row.covered[idx] {
                            COVER_NA => {}
                            hit => {
                                defined += 1;
                                hits += hit as usize;
                            }
                        }
                    }
                    (defined > 0).then(|| hits as f64 / defined as f64)
                } else {
                    None
                };
                cells.push(CellStats {
                    estimator: est,
                    s,
                    k,
                    n_design: if est.is_ratio() {
                        (su + 1) * k - 1
                    } else {
                        (su + 1) * k_max - 1
                    },
                    valid,
                    failed: plan.replicates - valid,
                    mean,
                    variance,
                    bias,
                    rmse,
                    coverage,
                });
            }
        }
        if plan.retain_estimates {
            raw_kept.extend(rows.into_iter().map(|r| r.values));
        }
    }

    Ok(ExperimentResult {
        plan: plan.clone(),
        cells,
        raw_estimates: plan.retain_estimates.then_some(raw_kept),
    })
}

/// Per-replicate raw log-ratios `log(X_{(ks,n)} / X_{(k,n)})` on samples of
/// size `n = (s+1)k - 1`, one stream per replicate. A degenerate replicate
/// (tied order statistics) yields NaN.
pub fn log_ratio_samples(
    model: &TailModel,
    s: u32,
    k: usize,
    replicates: usize,
    master_seed: u64,
) -> Result<Vec<f64>> {
    if s < 2 || k == 0 || replicates == 0 {
        return Err(Error::domain(format!(
            "need s >= 2, k >= 1, replicates >= 1; got s={s}, k={k}, replicates={replicates}"
        )));
    }
    let n = (s as usize + 1) * k - 1;
    Ok((0..replicates)
        .into_par_iter()
        .map(|rep| {
            let raw = model.sample(n, SeedSpec::new(master_seed, rep as u64));
            let sample = OrderedSample::new(&raw).expect("model draws are positive");
            crate::estimators::log_ratio(&sample, k, s).unwrap_or(f64::NAN)
        })
        .collect())
}

/// One-sample Kolmogorov-Smirnov test: the statistic `D_n` and the
/// asymptotic p-value `kolmogorov_sf(sqrt(n) D_n)`.
pub fn ks_gof<F: Fn(f64) -> f64>(values: &[f64], cdf: F) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("KS input must be finite".to_string()));
    }
    let mut xs = values.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok((d, kolmogorov_sf(n.sqrt() * d)))
}

/// Fraction of replicates whose level-`plan.level` interval contains the
/// true tail index; the design is `k = plan.k_max` with `s = s_list[0]`.
/// Degenerate replicates count as misses so the denominator is always the
/// replicate count.
pub fn coverage_experiment(plan: &ExperimentPlan) -> Result<f64> {
    plan.validate()?;
    if !plan.estimators.contains(&EstimatorKind::QStar) {
        return Err(Error::domain(
            "coverage is defined through the Q* interval; add it to the plan".to_string(),
        ));
    }
    let alpha = plan.model.tail_index().ok_or_else(|| {
        Error::domain("coverage needs a model with a known tail index".to_string())
    })?;
    let s = plan.s_list[0];
    let k = plan.k_max;
    let ratios = log_ratio_samples(&plan.model, s, k, plan.replicates, plan.master_seed)?;
    let mut covered = 0usize;
    for lr in ratios {
        if !lr.is_finite() {
            continue;
        }
        let ci = ConfidenceInterval::from_log_ratio(lr, k, s, plan.level)?;
        if ci.contains(alpha) {
            covered += 1;
        }
    }
    Ok(covered as f64 / plan.replicates as f64)
}

/// One row of the estimator-vs-k table behind the convergence figures.
#[derive(Clone, Copy, Debug)]
pub struct FigureRow {
    pub alpha: f64,
    pub s: u32,
    pub k: usize,
    /// `1/Q*` averaged over the replicates (NaN if every replicate failed).
    pub avg_inv_qstar: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
}

/// Defaults of the convergence-figure grid: `alpha` in {0.3, 0.5, 1, 1.5},
/// `s` in {2..5}, `k` up to 500, 100 replicates, level 0.95.
pub fn figure_defaults() -> (Vec<f64>, Vec<u32>, usize, usize, f64) {
    (vec![0.3, 0.5, 1.0, 1.5], vec![2, 3, 4, 5], 500, 100, 0.95)
}

/// Replicate-averaged `1/Q*` curves with the confidence interval computed
/// from the averaged value, for every `(alpha, s, k)` in the grid. Rows are
/// emitted in `(alpha, s, k)` order, `|alpha_list| * |s_list| * k_max` in
/// total; Pareto scale is fixed at 1 (the statistics are scale-free).
pub fn figure_grid(
    alpha_list: &[f64],
    s_list: &[u32],
    k_max: usize,
    replicates: usize,
    level: f64,
    master_seed: u64,
) -> Result<Vec<FigureRow>> {
    if alpha_list.is_empty() || s_list.is_empty() {
        return Err(Error::domain("empty figure grid".to_string()));
    }
    let mut rows = Vec::with_capacity(alpha_list.len() * s_list.len() * k_max);
    for &alpha in alpha_list {
        let model = TailModel::pareto(alpha, 1.0)?;
        for &s in s_list {
            let plan = ExperimentPlan {
                model,
                s_list: vec![s],
                k_max,
                replicates,
                level,
                master_seed,
                estimators: vec![EstimatorKind::QStar],
                retain_estimates: true,
            };
            let result = run_plan(&plan)?;
            let raw = result.raw_estimates.as_ref().expect("retained");
            let ln_s = (s as f64).ln();
            for k in 1..=k_max {
                let mut sum = CompensatedSum::new();
                let mut valid = 0usize;
                for row in raw {
                    let q_star = row[k - 1];
                    if q_star.is_finite() && q_star > 0.0 {
                        sum.add(1.0 / q_star);
                        valid += 1;
                    }
                }
                let (avg, lo, hi) = if valid > 0 {
                    let avg = sum.total() / valid as f64;
                    // CI (same formula as per-replicate) evaluated at the
                    // averaged estimate: implied log-ratio is ln(s)/avg.
                    let ci = ConfidenceInterval::from_log_ratio(ln_s / avg, k, s, level)?;
                    (avg, ci.lower, ci.upper)
                } else {
                    (f64::NAN, f64::NAN, f64::NAN)
                };
                rows.push(FigureRow {
                    alpha,
                    s,
                    k,
                    avg_inv_qstar: avg,
                    ci_lower: lo,
                    ci_upper: hi,
                });
            }
        }
    }
    Ok(rows)
}
