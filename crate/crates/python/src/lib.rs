//! Python bindings: thin wrappers over the core library. Structured results
//! come back as plain dicts and lists.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde_json::Value;

use quasistable::analysis::{self, ExpectationSeries, SpectrumDescriptor};
use quasistable::evolution::{self, ComplexMass};
use quasistable::kinematics::{self, FourVector, Spin};
use quasistable::runner::{self, RunOptions};
use quasistable::state::{normalize, GridMode, GridSpec, QuadratureGrid, StateSpec};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn to_json<T: serde::Serialize>(v: &T) -> PyResult<Value> {
    serde_json::to_value(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Mass and width of a quasistable state.
#[pyclass(name = "ComplexMass", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyComplexMass {
    inner: ComplexMass,
}

#[pymethods]
impl PyComplexMass {
    #[new]
    fn new(mass: f64, width: f64) -> PyResult<Self> {
        ComplexMass::new(mass, width).map(|inner| Self { inner }).map_err(value_err)
    }

    #[getter]
    fn mass(&self) -> f64 {
        self.inner.mass
    }

    #[getter]
    fn width(&self) -> f64 {
        self.inner.width
    }

    /// `M - iΓ/2`
    fn sqrt_s(&self) -> Complex64 {
        self.inner.sqrt_s()
    }

    fn s_r(&self) -> Complex64 {
        self.inner.s_r()
    }

    fn __repr__(&self) -> String {
        format!("ComplexMass(mass={}, width={})", self.inner.mass, self.inner.width)
    }
}

/// `"in_forward_cone"`, `"spacelike"` or `"past_pointing"`.
#[pyfunction]
fn classify_interval(t: f64, x: f64, y: f64, z: f64) -> &'static str {
    kinematics::classify_interval(&FourVector::new(t, x, y, z)).as_str()
}

/// Strip bounds of the closed-form spectrum ray.
#[pyfunction]
fn spectral_bounds<'py>(py: Python<'py>, cm: &PyComplexMass) -> PyResult<Bound<'py, PyAny>> {
    let b = analysis::spectral_bounds(&SpectrumDescriptor::ClosedFormRay(cm.inner));
    to_py(py, &to_json(&b)?)
}

/// Strip bounds of an explicit list of complex spectral points.
#[pyfunction]
fn sampled_bounds<'py>(py: Python<'py>, points: Vec<Complex64>) -> PyResult<Bound<'py, PyAny>> {
    if points.is_empty() {
        return Err(PyValueError::new_err("sampled spectra must be nonempty"));
    }
    to_py(py, &to_json(&analysis::sampled_bounds(&points))?)
}

fn grid_from(mode: &str, u_max: f64, n: usize) -> PyResult<QuadratureGrid> {
    let mode = match mode {
        "one_d_reduced" => GridMode::OneDReduced,
        "three_d" => GridMode::ThreeD,
        other => return Err(PyValueError::new_err(format!("unknown grid mode {other:?}"))),
    };
    QuadratureGrid::new(GridSpec { mode, u_max, n }).map_err(value_err)
}

/// `‖evolve(f, t)‖²` for a normalized Gaussian packet.
#[pyfunction]
#[pyo3(signature = (cm, times, center=[0.0, 0.0, 0.3], width=1.0, grid_mode="one_d_reduced", u_max=8.0, n=64))]
fn evolve_norms(
    cm: &PyComplexMass,
    times: Vec<f64>,
    center: [f64; 3],
    width: f64,
    grid_mode: &str,
    u_max: f64,
    n: usize,
) -> PyResult<Vec<f64>> {
    let grid = grid_from(grid_mode, u_max, n)?;
    let spec = StateSpec::Gaussian { center, width, spin_weights: None };
    let f = spec.build(Spin::ZERO, cm.inner.mass).map_err(value_err)?;
    let state = normalize(&f, &grid).map_err(value_err)?;
    times
        .iter()
        .map(|&t| {
            let psi = evolution::evolve(&state.wavefunction, &cm.inner, t).map_err(value_err)?;
            Ok(quasistable::state::norm_squared(&psi, &grid))
        })
        .collect()
}

/// Classifies a sampled series: `"almost_never_zero"`, `"identically_zero"`
/// or `"inconclusive"`.
#[pyfunction]
#[pyo3(signature = (t, values, eps=analysis::DEFAULT_ZERO_EPS))]
fn dichotomy_probe<'py>(py: Python<'py>, t: Vec<f64>, values: Vec<f64>, eps: f64) -> PyResult<Bound<'py, PyAny>> {
    if t.len() != values.len() || t.is_empty() {
        return Err(PyValueError::new_err("t and values must be nonempty and of equal length"));
    }
    let report = analysis::dichotomy_probe(&ExpectationSeries::synthetic(t, values), eps);
    to_py(py, &to_json(&report)?)
}

/// Validates a JSON config; returns a list of `"path: message"` strings
/// (empty when valid).
#[pyfunction]
fn validate_config(text: &str) -> Vec<String> {
    match runner::validate(text) {
        Ok(_) => Vec::new(),
        Err(errors) => errors.iter().map(ToString::to_string).collect(),
    }
}

/// Runs a JSON config, writing outputs to `out_dir`; returns the summary
/// with an added `exit_code`.
#[pyfunction]
#[pyo3(signature = (text, out_dir, deterministic=true))]
fn run_config<'py>(py: Python<'py>, text: &str, out_dir: &str, deterministic: bool) -> PyResult<Bound<'py, PyAny>> {
    let cfg = runner::validate(text).map_err(|errors| {
        PyValueError::new_err(errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
    })?;
    let options = RunOptions {
        out_dir: Some(out_dir.into()),
        threads: None,
        deterministic,
    };
    let outcome = py
        .detach(|| runner::run(&cfg, &options))
        .map_err(|e| PyRuntimeError::new_err(format!("{e:#}")))?;
    let mut summary = outcome.summary;
    summary["exit_code"] = Value::from(outcome.exit_code);
    to_py(py, &summary)
}

/// Randomized property suites; a list of dicts with `check`, `max_defect`,
/// `tolerance` and `passed`.
#[pyfunction]
#[pyo3(signature = (seed=0))]
fn selftest<'py>(py: Python<'py>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let checks = py.detach(|| runner::run_selftest(seed));
    to_py(py, &to_json(&checks)?)
}

#[pymodule]
pub fn pyquasistable(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyComplexMass>()?;
    m.add_function(wrap_pyfunction!(classify_interval, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(sampled_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_norms, m)?)?;
    m.add_function(wrap_pyfunction!(dichotomy_probe, m)?)?;
    m.add_function(wrap_pyfunction!(validate_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
