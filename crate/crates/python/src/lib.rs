//! Python bindings: static and dynamic measures, and the verification harness.
//!
//! Distributions are spec strings such as `weibull:1,2` or `exponential:1`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;

use cuminfo::dynamic::{self, DynamicKind};
use cuminfo::order::{self, HarnessConfig};
use cuminfo::{measures, DistSpec, Distribution, QuadratureConfig};

fn err(e: cuminfo::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn dist(spec: &str) -> PyResult<Distribution> {
    DistSpec::parse(spec).and_then(|s| s.build()).map_err(err)
}

fn quad(tol: Option<f64>) -> PyResult<QuadratureConfig> {
    let mut q = QuadratureConfig::default();
    if let Some(t) = tol {
        q.rel_tol = t;
    }
    q.validate().map_err(err)?;
    Ok(q)
}

/// Names accepted by `measure`.
#[pyfunction]
fn measure_names() -> Vec<&'static str> {
    measures::MEASURE_NAMES.to_vec()
}

/// A static measure; `None` when the defining integral diverges.
#[pyfunction]
#[pyo3(signature = (name, x, y=None, tol=None))]
fn measure(name: &str, x: &str, y: Option<&str>, tol: Option<f64>) -> PyResult<Option<f64>> {
    let x = dist(x)?;
    let y = y.map(dist).transpose()?;
    let m = measures::compute(name, &x, y.as_ref(), &quad(tol)?).map_err(err)?;
    Ok(m.finite())
}

/// A dynamic measure (dcre, dcri, dcpe, dcpi) at each `t`; `None` entries
/// diverged.
#[pyfunction]
#[pyo3(signature = (name, x, ts, y=None, tol=None))]
fn curve(name: &str, x: &str, ts: Vec<f64>, y: Option<&str>, tol: Option<f64>) -> PyResult<Vec<Option<f64>>> {
    let kind: DynamicKind = name.parse().map_err(err)?;
    let x = dist(x)?;
    let y = y.map(dist).transpose()?;
    let c = dynamic::curve(kind, &x, y.as_ref(), &ts, &quad(tol)?).map_err(err)?;
    Ok(c.values.iter().map(|v| Some(*v).filter(|v| v.is_finite())).collect())
}

/// Run registry entries (or `["all"]`); one dict per report.
#[pyfunction]
#[pyo3(signature = (ids, trials=20, seeds=vec![1]))]
fn verify<'py>(py: Python<'py>, ids: Vec<String>, trials: usize, seeds: Vec<u64>) -> PyResult<Bound<'py, PyAny>> {
    let ids: Vec<&str> = ids.iter().map(String::as_str).collect();
    let v = order::verify(&ids, trials, &seeds, &HarnessConfig::default()).map_err(err)?;
    let text = serde_json::to_string(&v.reports).map_err(|e| PyValueError::new_err(e.to_string()))?;
    PyModule::import(py, "json")?.call_method1("loads", (text,))
}

#[pymodule]
fn cuminfo_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(measure_names, m)?)?;
    m.add_function(wrap_pyfunction!(measure, m)?)?;
    m.add_function(wrap_pyfunction!(curve, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
