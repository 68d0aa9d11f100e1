//! Python bindings: thin wrappers over the subuni crate. Model and
//! statistic arguments use the same spec strings as the CLI
//! (`clayton:n=5,t=1`, `rmean:r=-1`, ...).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use subuni::analytics;
use subuni::copula::{kendall_tau_empirical, parse_model, parse_stat};
use subuni::mc::{self, Estimate, SimulationPlan};
use subuni::merge as merging;
use subuni::merge::{MergeStatistic, PValues, Weights};
use subuni::specfun;
use subuni::RandomStream;

fn err(e: subuni::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn stat_for(spec: &str, dim: usize) -> PyResult<MergeStatistic> {
    parse_stat(spec, dim).map_err(err)
}

fn estimate_dict<'py>(py: Python<'py>, est: &Estimate) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", est.value)?;
    d.set_item("stderr", est.stderr)?;
    d.set_item("ci_low", est.ci_low)?;
    d.set_item("ci_high", est.ci_high)?;
    d.set_item("reps", est.reps)?;
    d.set_item("seed", est.seed)?;
    d.set_item("level", est.level)?;
    Ok(d)
}

/// Merge p-values with a statistic spec (`rmean:r=-1`, `simes`, `cauchy`).
#[pyfunction]
fn merge(stat: &str, pvalues: Vec<f64>) -> PyResult<f64> {
    let s = stat_for(stat, pvalues.len())?;
    let p = PValues::new(pvalues).map_err(err)?;
    merging::merge(&s, &p).map_err(err)
}

/// Weighted r-mean of p-values; equal weights when `weights` is omitted.
#[pyfunction]
#[pyo3(signature = (r, pvalues, weights=None))]
fn r_mean(r: f64, pvalues: Vec<f64>, weights: Option<Vec<f64>>) -> PyResult<f64> {
    let w = match weights {
        Some(v) => Weights::new(v).map_err(err)?,
        None => Weights::equal(pvalues.len()),
    };
    let p = PValues::new(pvalues).map_err(err)?;
    merging::r_mean(r, &w, &p).map_err(err)
}

/// Simes statistic min_i n u_(i) / i.
#[pyfunction]
fn simes(pvalues: Vec<f64>) -> PyResult<f64> {
    let p = PValues::new(pvalues).map_err(err)?;
    merging::simes(&p).map_err(err)
}

/// Draw `reps` vectors from a copula model spec; returns a list of lists.
#[pyfunction]
#[pyo3(signature = (model, reps, seed=0, stream=0))]
fn sample(model: &str, reps: usize, seed: u64, stream: u64) -> PyResult<Vec<Vec<f64>>> {
    let m = parse_model(model).map_err(err)?;
    let mut rng = RandomStream::new(seed, stream);
    let mut out = Vec::with_capacity(reps);
    let mut buf = Vec::with_capacity(m.dimension());
    for _ in 0..reps {
        buf.clear();
        m.sample_into(&mut rng, &mut buf);
        out.push(buf.clone());
    }
    Ok(out)
}

/// Empirical Kendall tau between 1-based coordinates (i, j).
#[pyfunction]
#[pyo3(signature = (model, i, j, reps, seed=0))]
fn kendall_tau(model: &str, i: usize, j: usize, reps: usize, seed: u64) -> PyResult<f64> {
    let m = parse_model(model).map_err(err)?;
    let mut rng = RandomStream::new(seed, 0);
    kendall_tau_empirical(&m, (i, j), reps, &mut rng).map_err(err)
}

/// Exact P(M_{-r} <= p) under Clayton(r), r >= 1.
#[pyfunction]
fn clayton_exact_cdf(n: usize, r: f64, p: f64) -> PyResult<f64> {
    analytics::clayton_exact_cdf(n, r, p).map_err(err)
}

/// Dimension-free Gamma bound on P(M_{-1} <= p) under Clayton(t), t >= 1.
#[pyfunction]
fn clayton_gamma_bound(t: f64, p: f64) -> PyResult<f64> {
    analytics::clayton_gamma_bound(t, p).map_err(err)
}

/// The kappa multiplier and its argmax: returns (kappa, p_star, b_star).
#[pyfunction]
fn kappa() -> (f64, f64, f64) {
    let k = analytics::kappa_constant();
    (k.kappa, k.p_star, k.b_star)
}

/// Simple Clayton(1) threshold t_p = p / (1 + p).
#[pyfunction]
fn clayton_threshold(p: f64) -> PyResult<f64> {
    analytics::clayton_threshold(p).map_err(err)
}

/// Kappa-corrected threshold u_p = p / 1.131 for p <= 0.1.
#[pyfunction]
fn clayton_threshold_kappa(p: f64) -> PyResult<f64> {
    analytics::clayton_threshold_kappa(p).map_err(err)
}

/// Asymptotic p-quantile a_{n,p} of the harmonic mean under independence.
#[pyfunction]
fn asymptotic_threshold(n: usize, p: f64) -> PyResult<f64> {
    analytics::asymptotic_threshold(n, p).map_err(err)
}

/// Lower bound p_m on P(M_r <= p) for grid-supported p-values.
#[pyfunction]
fn discrete_pm(n: usize, m: u64, r: f64, p: f64) -> PyResult<f64> {
    analytics::discrete_pm(n, m, r, p).map_err(err)
}

/// CDF of the skewed 1-stable law S_1.
#[pyfunction]
fn stable1_cdf(x: f64) -> PyResult<f64> {
    specfun::stable1_cdf(x).map_err(err)
}

/// Quantile of S_1.
#[pyfunction]
fn stable1_quantile(q: f64) -> PyResult<f64> {
    specfun::stable1_quantile(q).map_err(err)
}

/// Draw from S_1 by the Chambers-Mallows-Stuck representation.
#[pyfunction]
#[pyo3(signature = (reps, seed=0))]
fn stable1_sample(reps: usize, seed: u64) -> Vec<f64> {
    let mut rng = RandomStream::new(seed, 0);
    (0..reps).map(|_| specfun::stable1_sample(&mut rng)).collect()
}

/// Monte Carlo estimate of R(p) = P(statistic <= p) under a copula model.
#[pyfunction]
#[pyo3(signature = (model, stat, p, reps, seed=0, chunks=64, level=0.99))]
fn estimate_rn<'py>(
    py: Python<'py>,
    model: &str,
    stat: &str,
    p: f64,
    reps: u64,
    seed: u64,
    chunks: u32,
    level: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let m = parse_model(model).map_err(err)?;
    let s = stat_for(stat, m.dimension())?;
    let plan = SimulationPlan::new(seed, reps).with_chunks(chunks).with_level(level);
    let est = mc::estimate_rn(&plan, &m, &s, p).map_err(err)?;
    estimate_dict(py, &est)
}

/// Monte Carlo estimate of the p-quantile of the statistic.
#[pyfunction]
#[pyo3(signature = (model, stat, p, reps, seed=0, chunks=64, level=0.99))]
fn estimate_threshold<'py>(
    py: Python<'py>,
    model: &str,
    stat: &str,
    p: f64,
    reps: u64,
    seed: u64,
    chunks: u32,
    level: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let m = parse_model(model).map_err(err)?;
    let s = stat_for(stat, m.dimension())?;
    let plan = SimulationPlan::new(seed, reps).with_chunks(chunks).with_level(level);
    let est = mc::estimate_threshold(&plan, &m, &s, p).map_err(err)?;
    estimate_dict(py, &est)
}

/// Sub-uniformity scan over a strictly increasing p grid; returns a list of
/// dicts with a verdict string per grid point.
#[pyfunction]
#[pyo3(signature = (model, stat, grid, reps, seed=0, chunks=64, level=0.99))]
fn scan<'py>(
    py: Python<'py>,
    model: &str,
    stat: &str,
    grid: Vec<f64>,
    reps: u64,
    seed: u64,
    chunks: u32,
    level: f64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let m = parse_model(model).map_err(err)?;
    let s = stat_for(stat, m.dimension())?;
    let plan = SimulationPlan::new(seed, reps).with_chunks(chunks).with_level(level);
    let rows = mc::scan_subuniformity(&plan, &m, &s, &grid).map_err(err)?;
    rows.iter()
        .map(|row| {
            let d = estimate_dict(py, &row.estimate)?;
            d.set_item("p", row.p)?;
            d.set_item("verdict", row.verdict.to_string())?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn subuni_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(merge, m)?)?;
    m.add_function(wrap_pyfunction!(r_mean, m)?)?;
    m.add_function(wrap_pyfunction!(simes, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(kendall_tau, m)?)?;
    m.add_function(wrap_pyfunction!(clayton_exact_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(clayton_gamma_bound, m)?)?;
    m.add_function(wrap_pyfunction!(kappa, m)?)?;
    m.add_function(wrap_pyfunction!(clayton_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(clayton_threshold_kappa, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(discrete_pm, m)?)?;
    m.add_function(wrap_pyfunction!(stable1_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(stable1_quantile, m)?)?;
    m.add_function(wrap_pyfunction!(stable1_sample, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_rn, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    Ok(())
}
