//! Python module `hankel`: series, decompositions, extremal forms and verification reports.
//!
//! Series come back as canonical text or as the JSON series format; reports as JSON.

use hankel_core::algebra::Field;
use hankel_core::forms::{decompose_egh, extremal_search, extremal_seed, monomial_basis, FormContext, FormId, DEFAULT_MARGIN};
use hankel_core::io::series_to_json;
use hankel_core::series::USeries;
use hankel_core::verify::{run_suite, theorem2_precision, Bounds, Suite};
use hankel_core::Error;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn series(form: &str, q: u32, precision: i64) -> hankel_core::Result<USeries> {
    let id: FormId = form.parse()?;
    let field = Field::with_order(q)?;
    Ok(id.compute(&FormContext::new(&field), precision)?.truncate(precision))
}

/// Canonical text of a form's u-expansion below u^precision.
#[pyfunction]
fn compute(form: &str, q: u32, precision: i64) -> PyResult<String> {
    series(form, q, precision).map(|s| s.to_string()).map_err(py_err)
}

/// The same series as JSON: {"q", "valuation", "precision", "coeffs": [[n, "coeff"], ...]}.
#[pyfunction]
fn compute_json(form: &str, q: u32, precision: i64) -> PyResult<String> {
    series(form, q, precision).map(|s| series_to_json(&s)).map_err(py_err)
}

/// Valuation of a form below u^precision, or None when it vanishes there.
#[pyfunction]
fn valuation(form: &str, q: u32, precision: i64) -> PyResult<Option<i64>> {
    series(form, q, precision).map(|s| s.valuation().ok()).map_err(py_err)
}

fn decompose_impl(form: &str, q: u32, space: Option<(u64, u64, u64)>, precision: Option<i64>) -> hankel_core::Result<(String, Option<u32>)> {
    let id: FormId = form.parse()?;
    let field = Field::with_order(q)?;
    let qq = q as u64;
    let (w, m, l) = match space {
        Some(s) => s,
        None => {
            let meta = id.default_meta(qq).ok_or_else(|| Error::Unsupported(format!("{id} has no default space")))?;
            (meta.weight, meta.type_m, meta.depth)
        }
    };
    let p = precision.unwrap_or_else(|| {
        let seed = extremal_seed(qq, w, l, monomial_basis(qq, w, m, l).len(), DEFAULT_MARGIN);
        match id {
            FormId::Ejk(j, k) => seed.max(theorem2_precision(qq, j, k)),
            _ => seed,
        }
    });
    let ctx = FormContext::new(&field);
    let poly = decompose_egh(&ctx, &id.compute(&ctx, p)?, w, m, l, DEFAULT_MARGIN)?;
    Ok((poly.to_string(), poly.depth()))
}

/// (polynomial in E, g, h, depth). The space defaults to the form's own.
#[pyfunction]
#[pyo3(signature = (form, q, w=None, m=None, l=None, precision=None))]
fn decompose(
    form: &str,
    q: u32,
    w: Option<u64>,
    m: Option<u64>,
    l: Option<u64>,
    precision: Option<i64>,
) -> PyResult<(String, Option<u32>)> {
    let space = match (w, m, l) {
        (Some(w), Some(m), Some(l)) => Some((w, m, l)),
        (None, None, None) => None,
        _ => return Err(PyValueError::new_err("give all of w, m, l or none")),
    };
    decompose_impl(form, q, space, precision).map_err(py_err)
}

/// (max_ord, series text, decomposition) of the extremal form of weight w, type m, depth <= l.
#[pyfunction]
#[pyo3(signature = (w, m, l, q, precision=None))]
fn extremal(w: u64, m: u64, l: u64, q: u32, precision: Option<i64>) -> PyResult<(i64, String, String)> {
    let field = Field::with_order(q).map_err(py_err)?;
    let ex = extremal_search(&FormContext::new(&field), w, m, l, precision).map_err(py_err)?;
    Ok((ex.max_ord, ex.series.to_string(), ex.poly.to_string()))
}

/// Runs a suite and returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (suite, qs, precision=None, kmax=None, jmax=2, samples=50, random_series=10, seed=0))]
#[allow(clippy::too_many_arguments)]
fn verify(
    suite: &str,
    qs: Vec<u32>,
    precision: Option<i64>,
    kmax: Option<u32>,
    jmax: u32,
    samples: usize,
    random_series: usize,
    seed: u64,
) -> PyResult<String> {
    let suite: Suite = suite.parse().map_err(py_err)?;
    for &q in &qs {
        Field::with_order(q).map_err(py_err)?;
    }
    let bounds = Bounds { kmax, jmax, samples, random_series, seed };
    Ok(run_suite(suite, &qs, &bounds, precision).to_json())
}

#[pyfunction]
fn version() -> &'static str {
    hankel_core::VERSION
}

/// Adds every function to `m`; the module initializer and embedders both use it.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(compute, m)?)?;
    m.add_function(wrap_pyfunction!(compute_json, m)?)?;
    m.add_function(wrap_pyfunction!(valuation, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(extremal, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(version, m)?)?;
    Ok(())
}

#[pymodule]
fn hankel(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
