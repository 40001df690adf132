//! Python bindings for `limitshape`.

use limitshape::dimers::SpectralCurve;
use limitshape::flow::{burgers_evolve as evolve, conserved_in, BurgersFunction, FlowState};
use limitshape::sixvertex::{torus_partition as torus, VertexWeights};
use limitshape::suites::{run_suite as run, Suite, SuiteConfig};
use limitshape::{tension, Error};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(limitshape_py, LimitShapeError, PyException);
create_exception!(limitshape_py, ShockError, LimitShapeError);
create_exception!(limitshape_py, NonConvergenceError, LimitShapeError);

fn err(e: Error) -> PyErr {
    match e {
        Error::Shock { .. } => ShockError::new_err(e.to_string()),
        Error::NonConvergence { .. } => NonConvergenceError::new_err(e.to_string()),
        Error::Domain(_) | Error::OutOfRange(_) | Error::OutOfSlopeDomain(..) | Error::Parse { .. } => PyValueError::new_err(e.to_string()),
        _ => LimitShapeError::new_err(e.to_string()),
    }
}

/// `None` for `hex`, `Some(u)` for `ff`.
fn free_fermion_u(variant: &str, u: Option<f64>) -> PyResult<Option<f64>> {
    match (variant, u) {
        ("hex", _) => Ok(None),
        ("ff", Some(u)) => Ok(Some(u)),
        ("ff", None) => Err(PyValueError::new_err("the ff variant needs u")),
        _ => Err(PyValueError::new_err(format!("unknown variant {variant:?}"))),
    }
}

/// Surface tension of the hexagonal dimer model.
#[pyfunction]
fn sigma_hex(s: f64, t: f64) -> PyResult<f64> {
    tension::sigma_hex(s, t).map_err(err)
}

#[pyfunction]
fn grad_sigma_hex(s: f64, t: f64) -> PyResult<[f64; 2]> {
    tension::grad_sigma_hex(s, t).map_err(err)
}

#[pyfunction]
fn hess_sigma_hex(s: f64, t: f64) -> PyResult<[[f64; 2]; 2]> {
    tension::hess_sigma_hex(s, t).map_err(err)
}

#[pyfunction]
fn grad_sigma_ff(s: f64, t: f64, u: f64) -> PyResult<[f64; 2]> {
    tension::grad_sigma_ff(s, t, u).map_err(err)
}

#[pyfunction]
fn hess_sigma_ff(s: f64, t: f64, u: f64) -> PyResult<[[f64; 2]; 2]> {
    tension::hess_sigma_ff(s, t, u).map_err(err)
}

/// Free energy of the `hex` or `ff` spectral curve at magnetic field `(h, v)`.
#[pyfunction]
#[pyo3(signature = (h, v, variant = "hex", u = None))]
fn free_energy(h: f64, v: f64, variant: &str, u: Option<f64>) -> PyResult<f64> {
    let curve = free_fermion_u(variant, u)?.map_or_else(SpectralCurve::hexagonal, SpectralCurve::free_fermion);
    tension::free_energy(&curve, h, v).map_err(err)
}

/// Exact six-vertex partition function on the `m x n` torus.
#[pyfunction]
#[pyo3(signature = (m, n, a, b, c, h = 0.0, v = 0.0))]
fn torus_partition(m: usize, n: usize, a: f64, b: f64, c: f64, h: f64, v: f64) -> PyResult<f64> {
    let w = VertexWeights::with_fields(a, b, c, h, v).map_err(err)?;
    torus(m, n, &w).map_err(err)
}

/// Evolve samples `(p, t)` on a circle to `x` along characteristics; returns `(p, t)`.
#[pyfunction]
#[pyo3(signature = (p, t, x, circumference = 1.0, variant = "hex", u = None))]
fn burgers_evolve(p: Vec<f64>, t: Vec<f64>, x: f64, circumference: f64, variant: &str, u: Option<f64>) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let f = match free_fermion_u(variant, u)? {
        None => BurgersFunction::hex(),
        Some(u) => BurgersFunction::free_fermion(u).map_err(err)?,
    };
    let s = FlowState::new(circumference, p, t).map_err(err)?;
    let out = evolve(&s.l(), circumference, &f, x).map_err(err)?;
    Ok((out.p, out.t))
}

/// `n`-th moment of `e^l` over the circle.
#[pyfunction]
#[pyo3(signature = (p, t, n, circumference = 1.0))]
fn conserved(p: Vec<f64>, t: Vec<f64>, n: u32, circumference: f64) -> PyResult<Complex64> {
    conserved_in(&FlowState::new(circumference, p, t).map_err(err)?, n).map_err(err)
}

/// Run one verification suite; returns `{"suite", "pass", "checks"}`.
#[pyfunction]
#[pyo3(signature = (name, seed = 0, tol = None))]
fn run_suite<'py>(py: Python<'py>, name: &str, seed: u64, tol: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
    let suite: Suite = name.parse().map_err(err)?;
    let rep = run(suite, &SuiteConfig { seed, tol, ..SuiteConfig::default() });
    let checks = rep
        .checks
        .iter()
        .map(|c| {
            let d = PyDict::new(py);
            d.set_item("name", &c.name)?;
            d.set_item("criterion", c.criterion)?;
            d.set_item("measured", c.measured)?;
            d.set_item("tolerance", c.tolerance)?;
            d.set_item("bound", c.bound.symbol())?;
            d.set_item("pass", c.pass)?;
            d.set_item("inputs", &c.inputs)?;
            Ok(d)
        })
        .collect::<PyResult<Vec<_>>>()?;
    let d = PyDict::new(py);
    d.set_item("suite", suite.name())?;
    d.set_item("pass", rep.pass())?;
    d.set_item("checks", checks)?;
    Ok(d)
}

#[pymodule]
fn limitshape_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("LimitShapeError", m.py().get_type::<LimitShapeError>())?;
    m.add("ShockError", m.py().get_type::<ShockError>())?;
    m.add("NonConvergenceError", m.py().get_type::<NonConvergenceError>())?;
    m.add_function(wrap_pyfunction!(sigma_hex, m)?)?;
    m.add_function(wrap_pyfunction!(grad_sigma_hex, m)?)?;
    m.add_function(wrap_pyfunction!(hess_sigma_hex, m)?)?;
    m.add_function(wrap_pyfunction!(grad_sigma_ff, m)?)?;
    m.add_function(wrap_pyfunction!(hess_sigma_ff, m)?)?;
    m.add_function(wrap_pyfunction!(free_energy, m)?)?;
    m.add_function(wrap_pyfunction!(torus_partition, m)?)?;
    m.add_function(wrap_pyfunction!(burgers_evolve, m)?)?;
    m.add_function(wrap_pyfunction!(conserved, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
