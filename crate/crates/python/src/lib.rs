//! Python module `pycylcover`. Bodies are passed as JSON strings in the same
//! format the command-line tool reads.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use cylcover::{ConvexBody, Error, Vector};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse(body: &str) -> PyResult<ConvexBody> {
    cylcover::io::body_from_json(body).map_err(py_err)
}

#[pyfunction]
fn volume(body: &str) -> PyResult<f64> {
    Ok(cylcover::volume::volume(&parse(body)?))
}

/// (width, direction)
#[pyfunction]
fn lattice_width(body: &str) -> PyResult<(f64, Vec<i64>)> {
    let w = cylcover::lattice::lattice_width(&parse(body)?).map_err(py_err)?;
    Ok((w.width, w.direction))
}

#[pyfunction]
fn sd(body: &str) -> PyResult<f64> {
    Ok(cylcover::analysis::sd(&parse(body)?).map_err(py_err)?.sd)
}

/// (M, M*)
#[pyfunction]
#[pyo3(signature = (body, samples=100_000, seed=0))]
fn mean_widths(body: &str, samples: usize, seed: u64) -> PyResult<(f64, f64)> {
    let r = cylcover::analysis::mean_widths(&parse(body)?, samples, seed).map_err(py_err)?;
    Ok((r.m, r.mstar))
}

#[pyfunction]
fn bang_chord_integral(z: Vec<f64>, d: usize) -> PyResult<f64> {
    cylcover::cylinders::bang_chord_integral(&Vector::from_vec(z), d).map_err(py_err)
}

/// (cardinality, optimal) of a cover of the points by k-flats.
#[pyfunction]
#[pyo3(signature = (points, k=1, exact=true))]
fn min_flat_cover(points: Vec<Vec<f64>>, k: usize, exact: bool) -> PyResult<(usize, bool)> {
    let pts: Vec<Vector> = points.into_iter().map(Vector::from_vec).collect();
    let sol = if exact {
        cylcover::flats::min_flat_cover_exact(&pts, k)
    } else {
        cylcover::flats::min_flat_cover_greedy(&pts, k)
    }
    .map_err(py_err)?;
    Ok((sol.cardinality, sol.optimal))
}

/// JSON report of a verification suite.
#[pyfunction]
#[pyo3(signature = (name, trials=None, d=None, seed=0))]
fn run_suite(py: Python<'_>, name: &str, trials: Option<usize>, d: Option<usize>, seed: u64) -> PyResult<String> {
    let cfg = cylcover::experiments::SuiteConfig { trials, d, seed };
    let rep = py
        .detach(|| cylcover::experiments::run_suite(name, &cfg))
        .map_err(py_err)?;
    Ok(rep.to_json())
}

#[pymodule]
fn pycylcover(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(volume, m)?)?;
    m.add_function(wrap_pyfunction!(lattice_width, m)?)?;
    m.add_function(wrap_pyfunction!(sd, m)?)?;
    m.add_function(wrap_pyfunction!(mean_widths, m)?)?;
    m.add_function(wrap_pyfunction!(bang_chord_integral, m)?)?;
    m.add_function(wrap_pyfunction!(min_flat_cover, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add("SUITES", cylcover::experiments::SUITES.to_vec())?;
    Ok(())
}
