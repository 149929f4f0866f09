//! Python bindings. Structured results cross the boundary as plain dicts built
//! from the same JSON documents the CLI emits.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde_json::Value;

use matdecomp_core as core;
use matdecomp_core::canonical::{self, CanonOptions};
use matdecomp_core::{io, rota, CanonLabel, FieldDescriptor, MLabel};

create_exception!(matdecomp, MatdecompError, PyException);

fn err(e: core::Error) -> PyErr {
    MatdecompError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn label(s: &str) -> PyResult<CanonLabel> {
    CanonLabel::parse(s).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn m_label(s: &str) -> PyResult<MLabel> {
    MLabel::parse(s).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn field(p: Option<u64>) -> PyResult<FieldDescriptor> {
    match p {
        None => Ok(FieldDescriptor::Rational),
        Some(p) => FieldDescriptor::prime(p).map_err(err),
    }
}

/// A decomposition `M₃ = S ⊕ M` with both halves closed.
#[pyclass(name = "Decomposition", frozen)]
struct PyDecomposition(core::Decomposition);

#[pymethods]
impl PyDecomposition {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::decomposition_from_json(text).map(PyDecomposition).map_err(err)
    }

    fn to_json(&self) -> String {
        io::decomposition_to_json(&self.0).to_string()
    }

    #[getter]
    fn m_label(&self) -> Option<String> {
        self.0.m_label().map(|m| m.to_string())
    }

    #[getter]
    fn label_hint(&self) -> Option<String> {
        self.0.label_hint().map(|l| l.to_string())
    }

    #[getter]
    fn field(&self) -> String {
        self.0.descriptor().to_string()
    }

    /// Basis of `S`, each matrix as rows of exact scalars in string form.
    fn s_basis(&self) -> Vec<Vec<Vec<String>>> {
        self.0
            .s()
            .basis()
            .iter()
            .map(|m| {
                (0..3)
                    .map(|i| (0..3).map(|j| m.get(i, j).to_string()).collect())
                    .collect()
            })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Decomposition(dim S = {}, M = {}, field = {})",
            self.0.s().dim(),
            self.m_label().unwrap_or_else(|| "?".into()),
            self.0.descriptor()
        )
    }
}

/// Outcome of canonicalization: label, transforms, and any adjoined root.
#[pyclass(name = "CanonResult", frozen)]
struct PyCanonResult(core::CanonResult);

#[pymethods]
impl PyCanonResult {
    #[getter]
    fn label(&self) -> String {
        self.0.label.to_string()
    }

    #[getter]
    fn extension(&self) -> Option<String> {
        self.0.extension.as_ref().map(|x| x.to_string())
    }

    #[getter]
    fn used_antiauto(&self) -> bool {
        self.0.used_antiauto
    }

    #[getter]
    fn n_transforms(&self) -> usize {
        self.0.transforms.len()
    }

    fn verify(&self, d: &PyDecomposition) -> PyResult<bool> {
        self.0.verify(&d.0).map_err(err)
    }

    fn to_json(&self) -> String {
        io::canon_result_to_json(&self.0).to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "CanonResult(label = {}, transforms = {})",
            self.0.label,
            self.0.transforms.len()
        )
    }
}

/// The catalog entry for `label`, over `F_p` when `p` is given.
#[pyfunction]
#[pyo3(signature = (label_name, p = None))]
fn catalog_entry(label_name: &str, p: Option<u64>) -> PyResult<PyDecomposition> {
    Ok(PyDecomposition(canonical::catalog_entry(
        label(label_name)?,
        &field(p)?,
    )))
}

#[pyfunction]
fn labels() -> Vec<String> {
    CanonLabel::ALL.iter().map(|l| l.to_string()).collect()
}

/// Four-condition report for a decomposition document.
#[pyfunction]
fn verify<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    let report = io::DecompositionDoc::parse(text)
        .and_then(|d| d.report())
        .map_err(err)?;
    let mut v = serde_json::to_value(&report).map_err(|e| err(e.into()))?;
    v["valid"] = Value::Bool(report.is_valid());
    to_py(py, &v)
}

#[pyfunction]
#[pyo3(signature = (label_name, seed, p = None))]
fn scramble(label_name: &str, seed: u64, p: Option<u64>) -> PyResult<PyDecomposition> {
    let (d, _) = canonical::scramble_in(&field(p)?, label(label_name)?, seed);
    Ok(PyDecomposition(d))
}

#[pyfunction]
#[pyo3(signature = (d, extend = true))]
fn canonicalize(d: &PyDecomposition, extend: bool) -> PyResult<PyCanonResult> {
    canonical::canonicalize_with(&d.0, CanonOptions { extend })
        .map(PyCanonResult)
        .map_err(err)
}

#[pyfunction]
fn fingerprint<'py>(py: Python<'py>, d: &PyDecomposition) -> PyResult<Bound<'py, PyAny>> {
    let fp = core::fingerprint(d.0.s()).map_err(err)?;
    to_py(py, &io::fingerprint_to_json(&fp, d.0.label_hint()))
}

#[pyfunction]
fn separate<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
    let r = core::fingerprint::separation_report(&CanonLabel::ALL).map_err(err)?;
    to_py(py, &r.to_json())
}

/// Rota–Baxter operator of the splitting, as a document with a `verified` flag.
#[pyfunction]
#[pyo3(signature = (d, weight = "1"))]
fn rb_operator<'py>(py: Python<'py>, d: &PyDecomposition, weight: &str) -> PyResult<Bound<'py, PyAny>> {
    let w = d.0.descriptor().parse(weight).map_err(err)?;
    let r = rota::rb_from_splitting(&d.0, &w).map_err(err)?;
    let ok = rota::verify_rb(&r);
    to_py(py, &io::rb_to_json(&r, Some(ok)))
}

#[pyfunction]
#[pyo3(signature = (p, m, budget = core::ffsearch::DEFAULT_BUDGET))]
fn search<'py>(py: Python<'py>, p: u64, m: &str, budget: u64) -> PyResult<Bound<'py, PyAny>> {
    let m = m_label(m)?;
    let r = py.detach(|| core::ffsearch::search(p, m, budget)).map_err(err)?;
    to_py(py, &io::search_report_to_json(&r))
}

#[pyfunction]
fn sample_search<'py>(py: Python<'py>, p: u64, m: &str, n: u64, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let m = m_label(m)?;
    let r = py.detach(|| core::sample_search(p, m, n, seed)).map_err(err)?;
    to_py(py, &io::search_report_to_json(&r))
}

#[pymodule]
fn matdecomp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MatdecompError", m.py().get_type::<MatdecompError>())?;
    m.add("SCHEMA", io::SCHEMA)?;
    m.add_class::<PyDecomposition>()?;
    m.add_class::<PyCanonResult>()?;
    m.add_function(wrap_pyfunction!(labels, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_entry, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(scramble, m)?)?;
    m.add_function(wrap_pyfunction!(canonicalize, m)?)?;
    m.add_function(wrap_pyfunction!(fingerprint, m)?)?;
    m.add_function(wrap_pyfunction!(separate, m)?)?;
    m.add_function(wrap_pyfunction!(rb_operator, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(sample_search, m)?)?;
    Ok(())
}
