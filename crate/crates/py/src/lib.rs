//! Python bindings for the tail-index estimation crate: the tail models,
//! ordered samples, ratio estimators, exact laws, baselines and the small
//! experiment helpers, exposed as the `tailq` extension module.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use tailq::asymptotics;
use tailq::baselines;
use tailq::montecarlo::{self, EstimatorKind, ExperimentPlan};
use tailq::special;
use tailq::{ExactLaw, OrderedSample, SeedSpec, TailModel};

fn err(e: tailq::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A parametric tail model: quantile, density, CDF and seeded sampling.
#[pyclass(name = "TailModel", module = "tailq", frozen)]
struct PyTailModel {
    inner: TailModel,
}

#[pymethods]
impl PyTailModel {
    #[staticmethod]
    fn pareto(shape: f64, scale: f64) -> PyResult<Self> {
        Ok(Self {
            inner: TailModel::pareto(shape, scale).map_err(err)?,
        })
    }

    #[staticmethod]
    fn exponential(rate: f64) -> PyResult<Self> {
        Ok(Self {
            inner: TailModel::exponential(rate).map_err(err)?,
        })
    }

    #[staticmethod]
    fn beta(a: f64, b: f64) -> PyResult<Self> {
        Ok(Self {
            inner: TailModel::beta(a, b).map_err(err)?,
        })
    }

    #[staticmethod]
    fn frechet(shape: f64) -> PyResult<Self> {
        Ok(Self {
            inner: TailModel::frechet(shape).map_err(err)?,
        })
    }

    #[staticmethod]
    fn log_logistic(shape: f64) -> PyResult<Self> {
        Ok(Self {
            inner: TailModel::log_logistic(shape).map_err(err)?,
        })
    }

    fn quantile(&self, p: f64) -> PyResult<f64> {
        self.inner.quantile(p).map_err(err)
    }

    fn density(&self, x: f64) -> f64 {
        self.inner.density(x)
    }

    fn cdf(&self, x: f64) -> f64 {
        self.inner.cdf(x)
    }

    /// `n` inverse-transform draws from stream `stream_id` of `master_seed`;
    /// bit-reproducible for a fixed pair.
    #[pyo3(signature = (n, master_seed, stream_id = 0))]
    fn sample(&self, n: usize, master_seed: u64, stream_id: u64) -> Vec<f64> {
        self.inner.sample(n, SeedSpec::new(master_seed, stream_id))
    }

    fn tail_index(&self) -> Option<f64> {
        self.inner.tail_index()
    }

    fn __repr__(&self) -> String {
        format!("TailModel({})", self.inner)
    }
}

/// Ascending-sorted positive observations with 1-indexed access.
#[pyclass(name = "OrderedSample", module = "tailq", frozen)]
struct PyOrderedSample {
    inner: OrderedSample,
}

#[pymethods]
impl PyOrderedSample {
    #[new]
    fn new(values: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: OrderedSample::new(&values).map_err(err)?,
        })
    }

    fn order_stat(&self, i: usize) -> PyResult<f64> {
        self.inner.order_stat(i).map_err(err)
    }

    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("OrderedSample(n={})", self.inner.len())
    }
}

/// Point estimate of one `(k, s)` design.
#[pyclass(name = "RatioEstimate", module = "tailq", frozen)]
struct PyRatioEstimate {
    #[pyo3(get)]
    k: usize,
    #[pyo3(get)]
    s: u32,
    #[pyo3(get)]
    n: usize,
    #[pyo3(get)]
    log_ratio: f64,
    #[pyo3(get)]
    q: f64,
    #[pyo3(get)]
    q_star: f64,
    #[pyo3(get)]
    alpha_hat: f64,
}

#[pymethods]
impl PyRatioEstimate {
    /// `1/Q`; `Q` itself is the unbiased estimator of `1/alpha`.
    fn inv_q(&self) -> f64 {
        1.0 / self.q
    }

    fn __repr__(&self) -> String {
        format!(
            "RatioEstimate(k={}, s={}, q={}, q_star={}, alpha_hat={})",
            self.k, self.s, self.q, self.q_star, self.alpha_hat
        )
    }
}

/// Two-sided asymptotic confidence interval for the tail index.
#[pyclass(name = "ConfidenceInterval", module = "tailq", frozen)]
struct PyConfidenceInterval {
    #[pyo3(get)]
    lower: f64,
    #[pyo3(get)]
    upper: f64,
    #[pyo3(get)]
    level: f64,
    #[pyo3(get)]
    k: usize,
    #[pyo3(get)]
    s: u32,
    #[pyo3(get)]
    n: usize,
}

#[pymethods]
impl PyConfidenceInterval {
    fn contains(&self, alpha: f64) -> bool {
        self.lower <= alpha && alpha <= self.upper
    }

    fn __repr__(&self) -> String {
        format!(
            "ConfidenceInterval([{}, {}], level={})",
            self.lower, self.upper, self.level
        )
    }
}

/// Exact finite-sample law of a ratio statistic under a Pareto model.
#[pyclass(name = "ExactLaw", module = "tailq", frozen)]
struct PyExactLaw {
    inner: ExactLaw,
}

#[pymethods]
impl PyExactLaw {
    #[staticmethod]
    fn q(k: usize, s: u32, alpha: f64) -> PyResult<Self> {
        Ok(Self {
            inner: ExactLaw::q(k, s, alpha).map_err(err)?,
        })
    }

    #[staticmethod]
    fn q_star(k: usize, s: u32, alpha: f64) -> PyResult<Self> {
        Ok(Self {
            inner: ExactLaw::q_star(k, s, alpha).map_err(err)?,
        })
    }

    #[staticmethod]
    fn log_ratio(i: usize, j: usize, n: usize, alpha: f64) -> PyResult<Self> {
        Ok(Self {
            inner: ExactLaw::log_ratio(i, j, n, alpha).map_err(err)?,
        })
    }

    fn pdf(&self, x: f64) -> f64 {
        self.inner.pdf(x)
    }

    fn cdf(&self, x: f64) -> f64 {
        self.inner.cdf(x)
    }

    /// `(mean, variance)` in closed form.
    fn moments(&self) -> (f64, f64) {
        self.inner.moments()
    }

    fn chebyshev_bound(&self, eps: f64) -> PyResult<f64> {
        self.inner.chebyshev_bound(eps).map_err(err)
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }
}

/// Baseline estimate of the extreme value index `gamma = 1/alpha`.
#[pyclass(name = "BaselineEstimate", module = "tailq", frozen)]
struct PyBaselineEstimate {
    #[pyo3(get)]
    method: String,
    #[pyo3(get)]
    k: usize,
    #[pyo3(get)]
    gamma_hat: f64,
    #[pyo3(get)]
    alpha_hat: Option<f64>,
}

impl From<baselines::BaselineEstimate> for PyBaselineEstimate {
    fn from(b: baselines::BaselineEstimate) -> Self {
        Self {
            method: b.method.to_string(),
            k: b.k,
            gamma_hat: b.gamma_hat,
            alpha_hat: b.alpha_hat,
        }
    }
}

#[pymethods]
impl PyBaselineEstimate {
    fn __repr__(&self) -> String {
        format!(
            "BaselineEstimate(method='{}', k={}, gamma_hat={})",
            self.method, self.k, self.gamma_hat
        )
    }
}

/// Delta-method variance with its `a`, `b` ingredients.
#[pyclass(name = "AsymptoticVariance", module = "tailq", frozen)]
struct PyAsymptoticVariance {
    #[pyo3(get)]
    s: u32,
    #[pyo3(get)]
    a: f64,
    #[pyo3(get)]
    b: f64,
    #[pyo3(get)]
    v: f64,
}

/// `log(X_{(ks,n)} / X_{(k,n)})` for a sample of size `n = (s+1)k - 1`.
#[pyfunction]
fn log_ratio(sample: &PyOrderedSample, k: usize, s: u32) -> PyResult<f64> {
    tailq::log_ratio(&sample.inner, k, s).map_err(err)
}

/// `Q`, `Q*` and `alpha_hat = 1/Q*` for one design.
#[pyfunction]
fn q_estimator(sample: &PyOrderedSample, k: usize, s: u32) -> PyResult<PyRatioEstimate> {
    let e = tailq::q_estimator(&sample.inner, k, s).map_err(err)?;
    Ok(PyRatioEstimate {
        k: e.k,
        s: e.s,
        n: e.n,
        log_ratio: e.log_ratio,
        q: e.q,
        q_star: e.q_star,
        alpha_hat: e.alpha_hat,
    })
}

/// Asymptotic confidence interval for the tail index.
#[pyfunction]
fn confidence_interval(
    sample: &PyOrderedSample,
    k: usize,
    s: u32,
    level: f64,
) -> PyResult<PyConfidenceInterval> {
    let ci = tailq::confidence_interval(&sample.inner, k, s, level).map_err(err)?;
    Ok(PyConfidenceInterval {
        lower: ci.lower,
        upper: ci.upper,
        level: ci.level,
        k: ci.k,
        s: ci.s,
        n: ci.n,
    })
}

/// `(k, lower_index, upper_index)` for a sample size `n = (s+1)k - 1`.
#[pyfunction]
fn design_indices(n: usize, s: u32) -> PyResult<(usize, usize, usize)> {
    let d = tailq::design_indices(n, s).map_err(err)?;
    Ok((d.k, d.lower, d.upper))
}

#[pyfunction]
fn hill(sample: &PyOrderedSample, k: usize) -> PyResult<PyBaselineEstimate> {
    baselines::hill(&sample.inner, k).map(Into::into).map_err(err)
}

#[pyfunction]
fn t_hill(sample: &PyOrderedSample, k: usize) -> PyResult<PyBaselineEstimate> {
    baselines::t_hill(&sample.inner, k).map(Into::into).map_err(err)
}

#[pyfunction]
fn pickands(sample: &PyOrderedSample, k: usize) -> PyResult<PyBaselineEstimate> {
    baselines::pickands(&sample.inner, k).map(Into::into).map_err(err)
}

#[pyfunction]
fn moment_dedh(sample: &PyOrderedSample, k: usize) -> PyResult<PyBaselineEstimate> {
    baselines::moment_dedh(&sample.inner, k).map(Into::into).map_err(err)
}

/// Delta-method variance `V` of the centered, scaled log-ratio.
#[pyfunction]
fn delta_method_variance(model: &PyTailModel, s: u32) -> PyResult<PyAsymptoticVariance> {
    let av = asymptotics::delta_method_variance(&model.inner, s).map_err(err)?;
    Ok(PyAsymptoticVariance {
        s: av.s,
        a: av.a,
        b: av.b,
        v: av.v,
    })
}

/// The 2x2 asymptotic covariance of the two central empirical quantiles,
/// as `((d11, d12), (d12, d22))`.
#[pyfunction]
fn quantile_covariance(model: &PyTailModel, s: u32) -> PyResult<((f64, f64), (f64, f64))> {
    let d = asymptotics::quantile_covariance(&model.inner, s).map_err(err)?;
    Ok(((d.d11, d.d12), (d.d12, d.d22)))
}

/// Limit variances `(log_ratio, q, q_star)` under a Pareto model.
#[pyfunction]
fn pareto_limit_variances(s: u32, alpha: f64) -> PyResult<(f64, f64, f64)> {
    let v = asymptotics::pareto_limit_variances(s, alpha).map_err(err)?;
    Ok((v.log_ratio, v.q, v.q_star))
}

/// Centering `log(F^{-1}(s/(s+1)) / F^{-1}(1/(s+1)))` of the scaled log-ratio.
#[pyfunction]
fn log_quantile_ratio(model: &PyTailModel, s: u32) -> PyResult<f64> {
    asymptotics::log_quantile_ratio(&model.inner, s).map_err(err)
}

#[pyfunction]
fn harmonic(n: u64) -> f64 {
    special::harmonic(n)
}

#[pyfunction]
fn generalized_harmonic(n: u64, m: u32) -> f64 {
    special::generalized_harmonic(n, m)
}

#[pyfunction]
fn reg_incomplete_beta(x: f64, a: f64, b: f64) -> PyResult<f64> {
    special::reg_incomplete_beta(x, a, b).map_err(err)
}

#[pyfunction]
fn std_normal_quantile(p: f64) -> PyResult<f64> {
    special::std_normal_quantile(p).map_err(err)
}

#[pyfunction]
fn std_normal_cdf(x: f64) -> f64 {
    special::std_normal_cdf(x)
}

#[pyfunction]
fn kolmogorov_sf(x: f64) -> f64 {
    special::kolmogorov_sf(x)
}

/// One-sample KS test of `values` against a CDF callable; returns
/// `(statistic, p_value)`.
#[pyfunction]
fn ks_gof(values: Vec<f64>, cdf: Bound<'_, PyAny>) -> PyResult<(f64, f64)> {
    if values.is_empty() {
        return Err(PyValueError::new_err("sample is empty"));
    }
    let mut xs = values;
    if xs.iter().any(|v| !v.is_finite()) {
        return Err(PyValueError::new_err("KS input must be finite"));
    }
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf.call1((x,))?.extract::<f64>()?;
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok((d, special::kolmogorov_sf(n.sqrt() * d)))
}

/// Per-replicate log-ratios on samples of size `(s+1)k - 1`, stream `r`
/// per replicate `r`; NaN marks a degenerate replicate.
#[pyfunction]
fn log_ratio_samples(
    model: &PyTailModel,
    s: u32,
    k: usize,
    replicates: usize,
    master_seed: u64,
) -> PyResult<Vec<f64>> {
    montecarlo::log_ratio_samples(&model.inner, s, k, replicates, master_seed).map_err(err)
}

/// Empirical coverage of the level-`level` interval at design `(k, s)`
/// over seeded replicates of a unit-scale Pareto model.
#[pyfunction]
fn coverage(
    alpha: f64,
    s: u32,
    k: usize,
    replicates: usize,
    level: f64,
    master_seed: u64,
) -> PyResult<f64> {
    let plan = ExperimentPlan {
        model: TailModel::pareto(alpha, 1.0).map_err(err)?,
        s_list: vec![s],
        k_max: k,
        replicates,
        level,
        master_seed,
        estimators: vec![EstimatorKind::QStar],
        retain_estimates: false,
    };
    montecarlo::coverage_experiment(&plan).map_err(err)
}

#[pymodule(name = "tailq")]
fn tailq_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTailModel>()?;
    m.add_class::<PyOrderedSample>()?;
    m.add_class::<PyRatioEstimate>()?;
    m.add_class::<PyConfidenceInterval>()?;
    m.add_class::<PyExactLaw>()?;
    m.add_class::<PyBaselineEstimate>()?;
    m.add_class::<PyAsymptoticVariance>()?;
    m.add_function(wrap_pyfunction!(log_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(q_estimator, m)?)?;
    m.add_function(wrap_pyfunction!(confidence_interval, m)?)?;
    m.add_function(wrap_pyfunction!(design_indices, m)?)?;
    m.add_function(wrap_pyfunction!(hill, m)?)?;
    m.add_function(wrap_pyfunction!(t_hill, m)?)?;
    m.add_function(wrap_pyfunction!(pickands, m)?)?;
    m.add_function(wrap_pyfunction!(moment_dedh, m)?)?;
    m.add_function(wrap_pyfunction!(delta_method_variance, m)?)?;
    m.add_function(wrap_pyfunction!(quantile_covariance, m)?)?;
    m.add_function(wrap_pyfunction!(pareto_limit_variances, m)?)?;
    m.add_function(wrap_pyfunction!(log_quantile_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic, m)?)?;
    m.add_function(wrap_pyfunction!(generalized_harmonic, m)?)?;
    m.add_function(wrap_pyfunction!(reg_incomplete_beta, m)?)?;
    m.add_function(wrap_pyfunction!(std_normal_quantile, m)?)?;
    m.add_function(wrap_pyfunction!(std_normal_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(kolmogorov_sf, m)?)?;
    m.add_function(wrap_pyfunction!(ks_gof, m)?)?;
    m.add_function(wrap_pyfunction!(log_ratio_samples, m)?)?;
    m.add_function(wrap_pyfunction!(coverage, m)?)?;
    Ok(())
}
