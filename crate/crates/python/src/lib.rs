//! Python module `jumpact`: stable sampling, path simulation, estimation and
//! Monte Carlo studies.

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ::jumpact as core;
use core::estimators::EstimatorConfig;
use core::io::RunConfig;
use core::stable::{PhiSpec, StableLaw, DEFAULT_MC_SEED};
use core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(_) => PyOSError::new_err(e.to_string()),
        Error::Degenerate(_) | Error::Study(_) | Error::Simulation { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn load_config(text: Option<&str>) -> PyResult<RunConfig> {
    text.map_or_else(
        || Ok(RunConfig::default()),
        |t| RunConfig::parse(t).map_err(py_err),
    )
}

/// Result of one estimation run.
#[pyclass(frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
pub struct EstimateReport {
    beta_hat: f64,
    beta_bar: Option<f64>,
    ci_low: f64,
    ci_high: f64,
    variance_hat: f64,
    variance_source: String,
    kappa_hat: f64,
    kappa_p_hat: f64,
    c_p_beta: f64,
    l_u: f64,
    l_v: f64,
    u_n: f64,
    v_n: f64,
    k_n: usize,
    r_n: usize,
    n_obs: usize,
    scaled_error: Option<f64>,
    std_stat: Option<f64>,
    warnings: Vec<String>,
}

#[pymethods]
impl EstimateReport {
    /// The debiased estimate when available, otherwise `beta_hat`.
    #[getter]
    fn estimate(&self) -> f64 {
        self.beta_bar.unwrap_or(self.beta_hat)
    }

    fn __repr__(&self) -> String {
        format!(
            "EstimateReport(beta_hat={:.4}, ci=({:.4}, {:.4}), n_obs={})",
            self.beta_hat, self.ci_low, self.ci_high, self.n_obs
        )
    }
}

impl From<core::EstimateReport> for EstimateReport {
    fn from(r: core::EstimateReport) -> Self {
        Self {
            beta_hat: r.beta_hat,
            beta_bar: r.beta_bar,
            ci_low: r.ci_low,
            ci_high: r.ci_high,
            variance_hat: r.variance_hat,
            variance_source: r.variance_source.to_string(),
            kappa_hat: r.kappa_hat,
            kappa_p_hat: r.kappa_p_hat,
            c_p_beta: r.c_p_beta,
            l_u: r.l_u,
            l_v: r.l_v,
            u_n: r.u_n,
            v_n: r.v_n,
            k_n: r.k_n,
            r_n: r.r_n,
            n_obs: r.n_obs,
            scaled_error: r.scaled_error,
            std_stat: r.std_stat,
            warnings: r.warnings,
        }
    }
}

/// Aggregates of one Monte Carlo cell; `emp_var` is `None` for one replication.
#[pyclass(frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
pub struct StudyRow {
    beta: f64,
    rho: f64,
    delta_inv: u64,
    mean: f64,
    emp_var: Option<f64>,
    theo_var: f64,
    n_failed: usize,
    mean_n_obs: f64,
    coverage: f64,
    /// `(theoretical, sample)` QQ pairs, empty below ten replications.
    qq: Vec<(f64, f64)>,
}

#[pymethods]
impl StudyRow {
    fn __repr__(&self) -> String {
        format!(
            "StudyRow(beta={}, rho={}, delta_inv={}, mean={:.4}, theo_var={:.4})",
            self.beta, self.rho, self.delta_inv, self.mean, self.theo_var
        )
    }
}

/// `n` draws of the standard symmetric stable law, `E exp(iuS) = exp(-|u|^beta)`.
#[pyfunction]
fn sample_stable(beta: f64, n: usize, seed: u64) -> PyResult<Vec<f64>> {
    let mut rng = core::rng::stream(seed, 0);
    (0..n)
        .map(|_| core::stable::sample_standard_stable(beta, &mut rng).map_err(py_err))
        .collect()
}

/// Levy-Khintchine constant `A_beta` of the law with Levy density `scale |x|^(-1-beta)`.
#[pyfunction]
#[pyo3(signature = (beta, scale = 1.0))]
fn a_beta(beta: f64, scale: f64) -> PyResult<f64> {
    core::stable::a_beta(beta, scale).map_err(py_err)
}

/// Limit constants for a truncated exponential duration law.
#[pyfunction]
#[pyo3(signature = (p, beta, mc_size = 1_000_000, seed = DEFAULT_MC_SEED, phi_rate = 1.0, phi_floor = 0.1))]
fn stable_constants<'py>(
    py: Python<'py>,
    p: f64,
    beta: f64,
    mc_size: usize,
    seed: u64,
    phi_rate: f64,
    phi_floor: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let phi = PhiSpec::truncated_exponential(phi_rate, phi_floor).map_err(py_err)?;
    let law = StableLaw::new(beta, 1.0).map_err(py_err)?;
    let c = core::stable::stable_constants(p, &law, &phi, mc_size, seed).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("a_beta", c.a_beta)?;
    d.set_item("mu_p_beta", c.mu_p_beta)?;
    d.set_item("kappa_p_beta", c.kappa_p_beta)?;
    d.set_item("kappa_beta_beta", c.kappa_beta_beta)?;
    d.set_item("c_p_beta", c.c_p_beta)?;
    Ok(d)
}

/// Limiting variance of `u^(beta/2) sqrt(N) (beta_hat - beta)`.
#[pyfunction]
fn asymptotic_variance(beta: f64, rho: f64, kappa_beta_beta: f64, c_p_beta: f64) -> PyResult<f64> {
    core::estimators::asymptotic_variance(beta, rho, kappa_beta_beta, c_p_beta).map_err(py_err)
}

/// One simulated path `(times, prices)` on `[0, 1]`. `config` is INI text;
/// `beta` and `delta_inv` override it when given.
#[pyfunction]
#[pyo3(signature = (seed, beta = None, delta_inv = None, config = None))]
fn simulate(
    seed: u64,
    beta: Option<f64>,
    delta_inv: Option<f64>,
    config: Option<&str>,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let mut cfg = load_config(config)?;
    if let Some(b) = beta {
        cfg.model.stable = StableLaw::new(b, cfg.model.stable.scale).map_err(py_err)?;
    }
    if let Some(n) = delta_inv {
        if n.is_nan() || n <= 0.0 {
            return Err(PyValueError::new_err("delta_inv must be positive"));
        }
        cfg.scheme.delta_n = 1.0 / n;
    }
    let path = core::simulate_replication(&cfg.model, &cfg.scheme, seed).map_err(py_err)?;
    Ok((
        path.observed_times().to_vec(),
        path.observed_values().to_vec(),
    ))
}

/// Estimates the index from observation times in `[0, 1]` and prices.
#[pyfunction]
#[pyo3(signature = (times, prices, p = 0.5, rho = 0.5, u_exponent = 1.0 / 3.0, debias = false,
                    mc_size = 1_000_000, true_beta = None))]
#[allow(clippy::too_many_arguments)]
fn estimate(
    times: Vec<f64>,
    prices: Vec<f64>,
    p: f64,
    rho: f64,
    u_exponent: f64,
    debias: bool,
    mc_size: usize,
    true_beta: Option<f64>,
) -> PyResult<EstimateReport> {
    let cfg = EstimatorConfig {
        p,
        rho,
        u_exponent,
        debias,
        mc_size,
        ..EstimatorConfig::default()
    };
    core::estimate(&times, &prices, &cfg, true_beta)
        .map(Into::into)
        .map_err(py_err)
}

/// Runs the Monte Carlo study described by INI text (sections `[model]`,
/// `[scheme]`, `[estimator]`, `[study]`).
#[pyfunction]
#[pyo3(signature = (config, reps = None, seed = None, workers = 0))]
fn run_study(
    py: Python<'_>,
    config: &str,
    reps: Option<usize>,
    seed: Option<u64>,
    workers: usize,
) -> PyResult<Vec<StudyRow>> {
    let mut cfg = RunConfig::parse(config).map_err(py_err)?.study_config();
    if let Some(r) = reps {
        cfg.n_reps = r;
    }
    if let Some(s) = seed {
        cfg.master_seed = s;
    }
    cfg.workers = workers;
    let cells = py.detach(|| core::run_study(&cfg)).map_err(py_err)?;
    Ok(cells
        .into_iter()
        .map(|c| StudyRow {
            beta: c.row.beta,
            rho: c.row.rho,
            delta_inv: c.row.delta_inv,
            mean: c.row.mean_beta_hat,
            emp_var: c.row.emp_var_std,
            theo_var: c.row.theo_var,
            n_failed: c.row.n_failed,
            mean_n_obs: c.row.mean_n_obs,
            coverage: c.coverage,
            qq: c.qq.map(|q| q.pairs).unwrap_or_default(),
        })
        .collect())
}

#[pymodule]
#[pyo3(name = "jumpact")]
pub fn jumpact_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<EstimateReport>()?;
    m.add_class::<StudyRow>()?;
    m.add_function(wrap_pyfunction!(sample_stable, m)?)?;
    m.add_function(wrap_pyfunction!(a_beta, m)?)?;
    m.add_function(wrap_pyfunction!(stable_constants, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_variance, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(run_study, m)?)?;
    m.add("DEFAULT_MC_SEED", DEFAULT_MC_SEED)?;
    Ok(())
}
