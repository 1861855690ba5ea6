//! Python module `gridkrig`: covariance models, theoretical grid errors,
//! Monte Carlo replicates, the Wilcoxon test and experiment presets.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use gridkrig::expcli::{run_preset, ExperimentConfig, ResultRow};
use gridkrig::simulate::run_monte_carlo_paired;
use gridkrig::spectral::{self, Family, GridDesign, Profile};
use gridkrig::stats;
use gridkrig::theory::{self, MinimaxQuery, QuadratureSpec};
use gridkrig::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NoConvergence { .. }
        | Error::QuadratureFailure { .. }
        | Error::NotPositiveDefinite { .. }
        | Error::Io { .. }
        | Error::Replicate { .. }
        | Error::Cell { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

fn design(steps: Vec<f64>) -> PyResult<GridDesign> {
    GridDesign::infinite(&steps).map_err(to_py)
}

/// A stationary covariance with its spectral density.
#[pyclass(name = "CovarianceModel", frozen, from_py_object)]
#[derive(Clone)]
struct PyCovarianceModel {
    inner: spectral::CovarianceModel,
}

#[pymethods]
impl PyCovarianceModel {
    #[new]
    #[pyo3(signature = (family, theta, profile = "consistent"))]
    fn new(family: &str, theta: f64, profile: &str) -> PyResult<Self> {
        let inner = spectral::CovarianceModel::new(parse(family)?, theta, parse(profile)?).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.inner.family().name()
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.inner.theta()
    }

    #[getter]
    fn profile(&self) -> &'static str {
        self.inner.profile().name()
    }

    fn covariance(&self, r: f64) -> f64 {
        self.inner.covariance(r)
    }

    fn spectral_density(&self, omega: f64) -> f64 {
        self.inner.spectral_density(omega)
    }

    fn spectral_mass(&self) -> f64 {
        self.inner.spectral_mass()
    }

    fn __repr__(&self) -> String {
        format!(
            "CovarianceModel('{}', {}, '{}')",
            self.inner.family(),
            self.inner.theta(),
            self.inner.profile()
        )
    }
}

/// Error of the predictor built from `used` when data follow `truth`, on an
/// infinite grid with the given per-axis steps.
#[pyfunction]
fn misspec_error(truth: &PyCovarianceModel, used: &PyCovarianceModel, steps: Vec<f64>) -> PyResult<f64> {
    theory::misspec_error(&truth.inner, &used.inner, &design(steps)?, &QuadratureSpec::default()).map_err(to_py)
}

#[pyfunction]
fn matched_error(model: &PyCovarianceModel, steps: Vec<f64>) -> PyResult<f64> {
    theory::matched_error(&model.inner, &design(steps)?, &QuadratureSpec::default()).map_err(to_py)
}

#[pyfunction]
fn aliasing_ratio_error(truth: &PyCovarianceModel, used: &PyCovarianceModel, steps: Vec<f64>) -> PyResult<f64> {
    theory::aliasing_ratio_error(&truth.inner, &used.inner, &design(steps)?, &QuadratureSpec::default()).map_err(to_py)
}

#[pyfunction]
fn transfer_function(used: &PyCovarianceModel, omega: f64, h: f64) -> PyResult<f64> {
    theory::transfer_function(&used.inner, omega, h).map_err(to_py)
}

#[pyfunction]
fn exponential_misspec_closed(theta: f64, theta_prime: f64, h: f64) -> PyResult<f64> {
    theory::exponential_misspec_closed(theta, theta_prime, h).map_err(to_py)
}

#[pyfunction]
fn minimax_error(budget: f64, steps: Vec<f64>) -> PyResult<f64> {
    Ok(theory::minimax_error(
        &MinimaxQuery::new(budget, &steps).map_err(to_py)?,
    ))
}

/// `(lower, upper)` bounds for the squared-exponential error.
#[pyfunction]
fn se_error_bounds(theta: f64, h: f64) -> PyResult<(f64, f64)> {
    let b = theory::se_error_bounds(theta, h).map_err(to_py)?;
    Ok((b.lower, b.upper))
}

/// Per-replicate errors for each used model `(family, theta')`, evaluated on
/// shared realizations of the true process on `size` nodes of `[0, 1]`.
#[pyfunction]
#[pyo3(signature = (family_true, theta, used, size, replicates = 20, seed = 0))]
fn monte_carlo(
    py: Python<'_>,
    family_true: &str,
    theta: f64,
    used: Vec<(String, f64)>,
    size: usize,
    replicates: usize,
    seed: u64,
) -> PyResult<Vec<Vec<f64>>> {
    let family_true: Family = parse(family_true)?;
    let used = used
        .iter()
        .map(|(f, t)| Ok((parse(f)?, *t)))
        .collect::<PyResult<Vec<_>>>()?;
    let samples = py
        .detach(|| run_monte_carlo_paired(family_true, theta, &used, size, replicates, seed))
        .map_err(to_py)?;
    Ok(samples.into_iter().map(|s| s.replicate_errors).collect())
}

#[pyclass(name = "TestResult", frozen, get_all, skip_from_py_object)]
struct PyTestResult {
    statistic: f64,
    p_value: f64,
    n_effective: usize,
    method: &'static str,
}

#[pymethods]
impl PyTestResult {
    fn __repr__(&self) -> String {
        format!(
            "TestResult(statistic={}, p_value={}, n_effective={}, method='{}')",
            self.statistic, self.p_value, self.n_effective, self.method
        )
    }
}

/// Paired two-sided Wilcoxon signed-rank test.
#[pyfunction]
fn wilcoxon_signed_rank(a: Vec<f64>, b: Vec<f64>) -> PyResult<PyTestResult> {
    let r = stats::wilcoxon_signed_rank(&a, &b).map_err(to_py)?;
    Ok(PyTestResult {
        statistic: r.statistic,
        p_value: r.p_value,
        n_effective: r.n_effective,
        method: match r.method {
            stats::Method::Exact => "exact",
            stats::Method::NormalApprox => "normal",
        },
    })
}

/// `(mean, std, ci95_low, ci95_high)`.
#[pyfunction]
fn summarize(samples: Vec<f64>) -> PyResult<(f64, f64, f64, f64)> {
    let s = stats::summarize(&samples).map_err(to_py)?;
    Ok((s.mean, s.std, s.ci95_low, s.ci95_high))
}

type Row = (
    String,
    f64,
    String,
    f64,
    usize,
    f64,
    Option<f64>,
    Option<f64>,
    Option<f64>,
);

fn row_tuple(r: &ResultRow) -> Row {
    (
        r.family_true.to_string(),
        r.theta,
        r.family_used.to_string(),
        r.theta_prime,
        r.size,
        r.step,
        r.empirical.map(|e| e.mean),
        r.theory_error,
        r.p_value,
    )
}

/// Run a preset from config text. Returns rows of
/// `(family_true, theta, family_used, theta_prime, S, h, emp_mean,
/// theory_error, p_value)` with `None` for missing values.
#[pyfunction]
fn run_config(py: Python<'_>, text: &str) -> PyResult<Vec<Row>> {
    let config = ExperimentConfig::parse(text).map_err(to_py)?;
    let set = py.detach(|| run_preset(&config)).map_err(to_py)?;
    Ok(set.rows.iter().map(row_tuple).collect())
}

#[pyfunction]
fn families() -> Vec<&'static str> {
    Family::ALL.iter().map(|f| f.name()).collect()
}

#[pyfunction]
fn profiles() -> Vec<&'static str> {
    [Profile::PaperVerbatim, Profile::Consistent]
        .iter()
        .map(|p| p.name())
        .collect()
}

#[pymodule]
#[pyo3(name = "gridkrig")]
fn gridkrig_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCovarianceModel>()?;
    m.add_class::<PyTestResult>()?;
    m.add_function(wrap_pyfunction!(misspec_error, m)?)?;
    m.add_function(wrap_pyfunction!(matched_error, m)?)?;
    m.add_function(wrap_pyfunction!(aliasing_ratio_error, m)?)?;
    m.add_function(wrap_pyfunction!(transfer_function, m)?)?;
    m.add_function(wrap_pyfunction!(exponential_misspec_closed, m)?)?;
    m.add_function(wrap_pyfunction!(minimax_error, m)?)?;
    m.add_function(wrap_pyfunction!(se_error_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo, m)?)?;
    m.add_function(wrap_pyfunction!(wilcoxon_signed_rank, m)?)?;
    m.add_function(wrap_pyfunction!(summarize, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add_function(wrap_pyfunction!(families, m)?)?;
    m.add_function(wrap_pyfunction!(profiles, m)?)?;
    Ok(())
}
