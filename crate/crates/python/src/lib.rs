//! Python bindings for `structmap`.
//!
//! Matrices cross the boundary as nested lists (rows) of Python numbers;
//! structures are named by preset, e.g. `"hamiltonian"` or `"pseudo-hermitian:2"`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use structmap::backward::eigenpair_backward_error;
use structmap::linalg;
use structmap::mapping::{self, MappingProblem};
use structmap::pseudospectra::eta_structured;
use structmap::structure::Preset;
use structmap::{CMat, StructureSpec, ToleranceProfile};

type Rows = Vec<Vec<Complex64>>;

fn py_err(e: structmap::Error) -> PyErr {
    PyValueError::new_err(format!("[{}] {e}", e.code()))
}

fn to_cmat(rows: &Rows) -> PyResult<CMat> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return Err(PyValueError::new_err("matrix must be non-empty"));
    }
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(PyValueError::new_err("ragged matrix rows"));
    }
    Ok(CMat::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn from_cmat(a: &CMat) -> Rows {
    (0..a.nrows()).map(|i| a.row(i).iter().copied().collect()).collect()
}

fn spec(preset: &str, n: usize) -> PyResult<StructureSpec> {
    preset.parse::<Preset>().and_then(|p| p.build(n)).map_err(py_err)
}

fn problem(x: &Rows, b: &Rows, preset: &str) -> PyResult<MappingProblem> {
    let x = to_cmat(x)?;
    let b = to_cmat(b)?;
    let spec = spec(preset, x.nrows())?;
    MappingProblem::new(x, b, spec, ToleranceProfile::default()).map_err(py_err)
}

/// Names of the available structure presets.
#[pyfunction]
fn presets() -> Vec<String> {
    Preset::all().iter().map(Preset::name).collect()
}

/// Decide whether a structured `A` with `A X = B` exists.
#[pyfunction]
fn check_existence<'py>(py: Python<'py>, x: Rows, b: Rows, preset: &str) -> PyResult<Bound<'py, PyDict>> {
    let rep = mapping::check_existence(&problem(&x, &b, preset)?);
    let d = PyDict::new(py);
    d.set_item("exists", rep.exists)?;
    d.set_item("range_ok", rep.range_ok)?;
    d.set_item("symmetry_ok", rep.symmetry_ok)?;
    d.set_item("defect_range", rep.defect_range)?;
    d.set_item("defect_symmetry", rep.defect_symmetry)?;
    Ok(d)
}

/// Minimal-norm structured solution; returns `(A, norm)`.
#[pyfunction]
#[pyo3(signature = (x, b, preset, norm = "frobenius"))]
fn solve(x: Rows, b: Rows, preset: &str, norm: &str) -> PyResult<(Rows, f64)> {
    let prob = problem(&x, &b, preset)?;
    let sol = match norm {
        "frobenius" => mapping::solve_frobenius(&prob),
        "spectral" => mapping::solve_spectral(&prob, None),
        other => return Err(PyValueError::new_err(format!("unknown norm '{other}'"))),
    }
    .map_err(py_err)?;
    Ok((from_cmat(&sol.a), sol.norm_value))
}

/// Random member of the structured solution family.
#[pyfunction]
#[pyo3(signature = (x, b, preset, seed = 0))]
fn family_sample(x: Rows, b: Rows, preset: &str, seed: u64) -> PyResult<Rows> {
    let prob = problem(&x, &b, preset)?;
    let fam = mapping::solution_family(&prob).map_err(py_err)?;
    let n = prob.spec().n();
    let z = linalg::random_complex(n, n, &mut linalg::rng(seed));
    mapping::family_member(&fam, &z).map(|a| from_cmat(&a)).map_err(py_err)
}

/// Structured backward errors `(frobenius, spectral)` of an approximate eigenpair.
#[pyfunction]
fn eigenpair_backward_errors(a: Rows, x: Vec<Complex64>, lam: Complex64, preset: &str) -> PyResult<(f64, f64)> {
    let a = to_cmat(&a)?;
    let x = CMat::from_column_slice(x.len(), 1, &x);
    let spec = spec(preset, a.nrows())?;
    let rep = eigenpair_backward_error(&a, &x, lam, &spec, &ToleranceProfile::default()).map_err(py_err)?;
    Ok((rep.value_frobenius, rep.value_spectral))
}

/// Structured eigenvalue backward error at `lam`; `eta` is `inf` when infeasible.
#[pyfunction]
fn eta<'py>(py: Python<'py>, a: Rows, lam: Complex64, preset: &str) -> PyResult<Bound<'py, PyDict>> {
    let a = to_cmat(&a)?;
    let spec = spec(preset, a.nrows())?;
    let r = eta_structured(&a, lam, &spec, &ToleranceProfile::default()).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("eta", r.eta)?;
    d.set_item("eta_unstructured", r.eta_unstructured)?;
    d.set_item("equality", r.equality)?;
    d.set_item("kind", format!("{:?}", r.kind).to_lowercase())?;
    d.set_item("certificate", r.certificate.as_ref().map(from_cmat))?;
    Ok(d)
}

#[pymodule]
fn pystructmap(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", structmap::VERSION)?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    m.add_function(wrap_pyfunction!(check_existence, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(family_sample, m)?)?;
    m.add_function(wrap_pyfunction!(eigenpair_backward_errors, m)?)?;
    m.add_function(wrap_pyfunction!(eta, m)?)?;
    Ok(())
}
