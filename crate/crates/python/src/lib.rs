//! Python bindings: matrix samples, spectra, limit formulas, the exact
//! oracle, enumeration and the covariance experiment.

use circlab::combinatorics::{self, EnumerationCaps, Family};
use circlab::ensemble::{self, TraceMethod};
use circlab::experiments::{self, ExperimentConfig, Verdict};
use circlab::fluctuations::CenteringMode;
use circlab::limit_theory::{self, CovQuery, TheoryMode};
use circlab::{LabError, MatrixKind};
use num_bigint::BigInt;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

fn err(e: LabError) -> PyErr {
    match e {
        LabError::Io { .. } => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn kind(s: &str) -> PyResult<MatrixKind> {
    s.parse().map_err(err)
}

fn mode(s: &str) -> PyResult<TheoryMode> {
    TheoryMode::parse(s).map_err(err)
}

/// One realised RC or SC matrix built from unscaled label values.
#[pyclass(name = "CirculantSample", frozen)]
struct PySample {
    inner: ensemble::CirculantSample,
}

#[pymethods]
impl PySample {
    #[new]
    #[pyo3(signature = (kind, n, labels, t = 1.0))]
    fn new(kind: &str, n: usize, labels: Vec<f64>, t: f64) -> PyResult<Self> {
        let k = self::kind(kind)?;
        ensemble::CirculantSample::from_labels(k, n, t, &labels)
            .map(|inner| PySample { inner })
            .map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.name()
    }

    /// Row-major dense matrix as a list of rows.
    fn dense(&self) -> Vec<Vec<f64>> {
        self.inner.dense().chunks(self.inner.n).map(|r| r.to_vec()).collect()
    }

    fn eigenvalues(&self) -> Vec<f64> {
        ensemble::spectrum(&self.inner).eigenvalues
    }

    #[pyo3(signature = (power, method = "spectral"))]
    fn trace_power(&self, power: u32, method: &str) -> PyResult<f64> {
        let m: TraceMethod = method.parse().map_err(err)?;
        ensemble::trace_power(&self.inner, power, m).map_err(err)
    }
}

/// Outcome of `run_covariance_experiment`.
#[pyclass(name = "CovarianceReport", frozen, get_all)]
struct PyCovarianceReport {
    experiment_id: String,
    kind: String,
    p: u32,
    q: u32,
    t1: f64,
    t2: f64,
    n: usize,
    replicas: usize,
    seed: u64,
    empirical: f64,
    se: f64,
    theory_paper: Option<f64>,
    theory_reconciled: Option<f64>,
    oracle: Option<f64>,
    verdict: String,
}

#[pymethods]
impl PyCovarianceReport {
    fn passed(&self) -> bool {
        self.verdict == Verdict::Pass.name()
    }

    fn __repr__(&self) -> String {
        format!(
            "CovarianceReport({} p={} q={} t=({}, {}) n={} R={}: {} +- {}, {})",
            self.kind, self.p, self.q, self.t1, self.t2, self.n, self.replicas, self.empirical, self.se, self.verdict
        )
    }
}

/// Brownian label paths on a time grid, as `[label][time]`.
#[pyfunction]
fn sample_brownian_paths(n_labels: usize, times: Vec<f64>, seed: u64) -> PyResult<Vec<Vec<f64>>> {
    let grid = ensemble::TimeGrid::new(times).map_err(err)?;
    let ens = ensemble::sample_brownian_paths(n_labels, &grid, seed).map_err(err)?;
    Ok((0..n_labels).map(|l| ens.path(l).to_vec()).collect())
}

#[pyfunction]
fn card_a2ps(n: u64, p: u64, s: i64) -> PyResult<BigInt> {
    combinatorics::card_a2ps(n, p, s).map_err(err)
}

/// `h_p(k)` as `(numerator, denominator)`.
#[pyfunction]
fn h_pk(p: u32, k: u32) -> PyResult<(BigInt, BigInt)> {
    let r = combinatorics::h_pk(p, k).map_err(err)?;
    Ok((r.numer().clone(), r.denom().clone()))
}

/// Number of tuples of the family; `length` is the tuple length.
#[pyfunction]
#[pyo3(signature = (family, n, length, s = 0, k = 0))]
fn count_tuples(family: &str, n: u32, length: usize, s: i64, k: usize) -> PyResult<u128> {
    let f = match family {
        "a2p" => Family::A2p,
        "a2ps" => Family::A2ps { s },
        "aksc" => Family::AkSc,
        "atilde" => Family::AtildeSc,
        "apk" => Family::Apk { k },
        other => return Err(PyValueError::new_err(format!("unknown family {other:?}"))),
    };
    combinatorics::count(f, n, length, &EnumerationCaps::default()).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (kind, p, q, t1, t2, mode = "reconciled"))]
fn limit_cov(kind: &str, p: u32, q: u32, t1: f64, t2: f64, mode: &str) -> PyResult<f64> {
    let query = CovQuery::new(self::kind(kind)?, p, q, t1, t2).map_err(err)?;
    limit_theory::limit_cov(&query, self::mode(mode)?).map_err(err)
}

#[pyfunction]
fn exact_finite_n_cov(kind: &str, p: u32, q: u32, t1: f64, t2: f64, n: u32) -> PyResult<f64> {
    limit_theory::exact_finite_n_cov(self::kind(kind)?, p, q, t1, t2, n).map_err(err)
}

/// Oracle values over small odd n and their `1/n` extrapolation.
#[pyfunction]
fn oracle_limit(kind: &str, p: u32, q: u32, t1: f64, t2: f64) -> PyResult<(Vec<(u32, f64)>, f64)> {
    let (seq, ex) = limit_theory::oracle_limit(self::kind(kind)?, p, q, t1, t2).map_err(err)?;
    Ok((seq, ex.limit))
}

#[pyfunction]
#[pyo3(signature = (kind, orders, times, n = 512, replicas = 20000, seed = 20240601, centering = "empirical", workers = 0))]
#[allow(clippy::too_many_arguments)]
fn run_covariance_experiment(
    py: Python<'_>,
    kind: &str,
    orders: Vec<u32>,
    times: Vec<f64>,
    n: usize,
    replicas: usize,
    seed: u64,
    centering: &str,
    workers: usize,
) -> PyResult<PyCovarianceReport> {
    let cfg = ExperimentConfig {
        n,
        replicas,
        seed,
        centering: CenteringMode::parse(centering).map_err(err)?,
        workers,
        ..ExperimentConfig::new(self::kind(kind)?, orders, times)
    };
    let r = py
        .detach(|| experiments::run_covariance_experiment(&cfg))
        .map_err(err)?;
    Ok(PyCovarianceReport {
        experiment_id: r.experiment_id,
        kind: r.kind.name().into(),
        p: r.p,
        q: r.q,
        t1: r.t1,
        t2: r.t2,
        n: r.n,
        replicas: r.replicas,
        seed: r.seed,
        empirical: r.empirical,
        se: r.se,
        theory_paper: r.theory_paper,
        theory_reconciled: r.theory_reconciled,
        oracle: r.oracle,
        verdict: r.verdict.name().into(),
    })
}

#[pymodule]
#[pyo3(name = "circlab")]
fn circlab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySample>()?;
    m.add_class::<PyCovarianceReport>()?;
    m.add_function(wrap_pyfunction!(sample_brownian_paths, m)?)?;
    m.add_function(wrap_pyfunction!(card_a2ps, m)?)?;
    m.add_function(wrap_pyfunction!(h_pk, m)?)?;
    m.add_function(wrap_pyfunction!(count_tuples, m)?)?;
    m.add_function(wrap_pyfunction!(limit_cov, m)?)?;
    m.add_function(wrap_pyfunction!(exact_finite_n_cov, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_limit, m)?)?;
    m.add_function(wrap_pyfunction!(run_covariance_experiment, m)?)?;
    Ok(())
}
