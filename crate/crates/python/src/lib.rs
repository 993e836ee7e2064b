//! Python bindings. Structured results cross the boundary as plain
//! dicts and lists decoded from the library's JSON serialization.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyTuple;
use serde::Serialize;

use relaydmt::dmt;
use relaydmt::jobs::{self, ExperimentConfig};
use relaydmt::montecarlo;
use relaydmt::schemes::SchemeConfig;
use relaydmt::topology;
use relaydmt::verify;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_python<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Piecewise-linear tradeoff curve given by its vertices `(r, d)`.
#[pyclass(name = "DmtCurve", module = "relaydmt_py", frozen)]
struct PyDmtCurve(dmt::DmtCurve);

#[pymethods]
impl PyDmtCurve {
    #[new]
    fn new(vertices: Vec<(f64, f64)>) -> PyResult<Self> {
        dmt::DmtCurve::new(vertices).map(Self).map_err(value_error)
    }

    #[getter]
    fn vertices(&self) -> Vec<(f64, f64)> {
        self.0.vertices().to_vec()
    }

    #[getter]
    fn r_max(&self) -> f64 {
        self.0.r_max()
    }

    #[getter]
    fn d_max(&self) -> f64 {
        self.0.d_max()
    }

    /// Raises ValueError outside `[0, r_max]`.
    fn eval(&self, r: f64) -> PyResult<f64> {
        self.0.eval(r).map_err(value_error)
    }

    /// Zero beyond `r_max`.
    fn eval_clamped(&self, r: f64) -> f64 {
        self.0.eval_clamped(r)
    }

    fn is_convex(&self) -> bool {
        self.0.is_convex()
    }

    fn scaled(&self, factor: f64) -> Self {
        Self(self.0.scaled(factor))
    }

    fn rate_scaled(&self, factor: f64) -> Self {
        Self(self.0.rate_scaled(factor))
    }

    fn __call__(&self, r: f64) -> f64 {
        self.0.eval_clamped(r)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("DmtCurve({:?})", self.0.vertices())
    }
}

/// Directed acyclic relay network; node 0 is the source, the last node the destination.
#[pyclass(name = "NetworkTopology", module = "relaydmt_py", frozen)]
struct PyTopology(topology::NetworkTopology);

#[pymethods]
impl PyTopology {
    #[new]
    fn new(nodes: Vec<u32>, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        topology::NetworkTopology::new(nodes, edges).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        topology::NetworkTopology::from_json_str(text).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        jobs::load_topology(&path).map(Self).map_err(value_error)
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    #[getter]
    fn antennas(&self) -> Vec<u32> {
        self.0.antennas().to_vec()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().to_vec()
    }

    fn min_cut_weight(&self) -> PyResult<u64> {
        topology::min_cut_weight(&self.0).map_err(value_error)
    }

    fn min_cut_exhaustive(&self) -> PyResult<u64> {
        topology::min_cut_exhaustive(&self.0).map_err(value_error)
    }

    fn min_cut_max_flow(&self) -> PyResult<u64> {
        topology::min_cut_max_flow(&self.0).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!("NetworkTopology({})", self.0.to_json_string())
    }
}

fn curve(result: relaydmt::Result<dmt::DmtCurve>) -> PyResult<PyDmtCurve> {
    result.map(PyDmtCurve).map_err(value_error)
}

#[pyfunction]
fn point_to_point(m: usize, n: usize) -> PyResult<PyDmtCurve> {
    curve(dmt::dmt_point_to_point(m, n))
}

#[pyfunction]
fn product_channel(m: usize, p: usize, n: usize) -> PyResult<PyDmtCurve> {
    curve(dmt::dmt_product(m, p, n))
}

/// Returns `(curve, rounds_sufficient, required_rounds)`; `rounds=None` is the unlimited-rounds limit.
#[pyfunction]
#[pyo3(signature = (m, n, p, relays, rounds=None))]
fn rs_parallel(m: usize, n: usize, p: usize, relays: usize, rounds: Option<usize>) -> PyResult<(PyDmtCurve, bool, usize)> {
    let out = dmt::dmt_rs_parallel(m, n, p, relays, rounds).map_err(value_error)?;
    Ok((PyDmtCurve(out.curve), out.rounds_sufficient, out.required_rounds))
}

/// Returns `(value, nu)` minimizing `c1(nu) + c2(2r - nu)`.
#[pyfunction]
fn min_sum(c1: &PyDmtCurve, c2: &PyDmtCurve, r: f64) -> PyResult<(f64, f64)> {
    let out = dmt::dmt_min_sum(&c1.0, &c2.0, r).map_err(value_error)?;
    Ok((out.value, out.nu))
}

#[pyfunction]
fn two_relay_limit(c1: &PyDmtCurve, c2: &PyDmtCurve) -> PyResult<PyDmtCurve> {
    curve(dmt::dmt_rs_two_relay_limit(&c1.0, &c2.0))
}

#[pyfunction]
fn modified_naf(m: usize, n: usize, p: usize) -> PyResult<PyDmtCurve> {
    curve(dmt::dmt_modified_naf(m, n, p))
}

#[pyfunction]
fn naf(m: usize, n: usize, p: usize) -> PyResult<PyDmtCurve> {
    curve(dmt::dmt_naf_baseline(m, n, p))
}

/// Returns `(curve, details)` where `details` describes the bottleneck and slot requirement.
#[pyfunction]
fn multi_hop<'py>(py: Python<'py>, antennas: Vec<usize>, slots: usize) -> PyResult<Bound<'py, PyTuple>> {
    let out = dmt::dmt_multi_hop(&antennas, slots).map_err(value_error)?;
    let details = serde_json::json!({
        "bottleneck": out.bottleneck,
        "condition_met": out.condition_met,
        "required_slots": out.required_slots,
        "slots_sufficient": out.slots_sufficient,
    });
    (PyDmtCurve(out.curve), to_python(py, &details)?).into_pyobject(py)
}

#[pyfunction]
fn general_network(topology: &PyTopology) -> PyResult<PyDmtCurve> {
    curve(dmt::dmt_general_network(&topology.0))
}

#[pyfunction]
fn cut_set_upper_bound(topology: &PyTopology) -> PyResult<PyDmtCurve> {
    curve(dmt::dmt_upper_bound_general(&topology.0))
}

fn scheme_from_json(scheme: &str) -> PyResult<SchemeConfig> {
    let config: SchemeConfig = serde_json::from_str(scheme).map_err(value_error)?;
    config.validate().map_err(value_error)?;
    Ok(config)
}

/// Outage estimate for a scheme given as JSON, e.g. `{"scheme": "point_to_point", "m": 1, "n": 1}`.
#[pyfunction]
fn estimate_outage<'py>(
    py: Python<'py>,
    scheme: &str,
    rate: f64,
    snr_db: f64,
    trials: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let config = scheme_from_json(scheme)?;
    let power = jobs::db_to_linear(snr_db);
    let estimate = py
        .detach(|| montecarlo::estimate_outage(&config, rate, power, trials, seed))
        .map_err(value_error)?;
    to_python(py, &estimate)
}

/// Sweep over an SNR grid in dB; returns `{"estimates": [...], "slope_fit": {...} | None}`.
#[pyfunction]
fn snr_sweep<'py>(
    py: Python<'py>,
    scheme: &str,
    rate: f64,
    snr_grid_db: Vec<f64>,
    trials: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let config = scheme_from_json(scheme)?;
    let powers: Vec<f64> = snr_grid_db.iter().map(|&db| jobs::db_to_linear(db)).collect();
    let estimates = py
        .detach(|| montecarlo::snr_sweep(&config, rate, &powers, trials, seed))
        .map_err(value_error)?;
    let fit = montecarlo::fit_diversity_slope(&estimates).ok();
    to_python(py, &serde_json::json!({ "estimates": estimates, "slope_fit": fit }))
}

#[pyfunction]
fn wilson_interval(failures: u64, trials: u64) -> (f64, f64) {
    montecarlo::wilson_interval(failures, trials)
}

/// Randomized check of the eigenvalue product bound.
#[pyfunction]
#[pyo3(signature = (samples, seed, max_dim=4))]
fn eigenvalue_bound_suite<'py>(py: Python<'py>, samples: u64, seed: u64, max_dim: usize) -> PyResult<Bound<'py, PyAny>> {
    let report = py
        .detach(|| verify::lemma3_suite(samples, max_dim, seed))
        .map_err(value_error)?;
    to_python(py, &report)
}

/// Per-realization check of the lower/exact/upper mutual information ordering.
#[pyfunction]
fn mutual_info_sandwich<'py>(
    py: Python<'py>,
    samples: u64,
    power: f64,
    dims: (usize, usize, usize),
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let c = (2 * dims.1 * dims.2 - 1) as f64;
    let report = py
        .detach(|| verify::check_mi_sandwich(samples, power, c, dims, seed))
        .map_err(value_error)?;
    to_python(py, &report)
}

/// Runs a job from its JSON config; returns `{"csv": str | None, "json": str | None, "success": bool}`.
#[pyfunction]
fn run_job<'py>(py: Python<'py>, config: &str) -> PyResult<Bound<'py, PyAny>> {
    let config = ExperimentConfig::from_json_str(config).map_err(value_error)?;
    let out = py.detach(|| jobs::run(&config)).map_err(value_error)?;
    to_python(py, &serde_json::json!({ "csv": out.csv, "json": out.json, "success": out.success }))
}

#[pymodule]
fn relaydmt_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDmtCurve>()?;
    m.add_class::<PyTopology>()?;
    m.add_function(wrap_pyfunction!(point_to_point, m)?)?;
    m.add_function(wrap_pyfunction!(product_channel, m)?)?;
    m.add_function(wrap_pyfunction!(rs_parallel, m)?)?;
    m.add_function(wrap_pyfunction!(min_sum, m)?)?;
    m.add_function(wrap_pyfunction!(two_relay_limit, m)?)?;
    m.add_function(wrap_pyfunction!(modified_naf, m)?)?;
    m.add_function(wrap_pyfunction!(naf, m)?)?;
    m.add_function(wrap_pyfunction!(multi_hop, m)?)?;
    m.add_function(wrap_pyfunction!(general_network, m)?)?;
    m.add_function(wrap_pyfunction!(cut_set_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_outage, m)?)?;
    m.add_function(wrap_pyfunction!(snr_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(wilson_interval, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalue_bound_suite, m)?)?;
    m.add_function(wrap_pyfunction!(mutual_info_sandwich, m)?)?;
    m.add_function(wrap_pyfunction!(run_job, m)?)?;
    Ok(())
}
