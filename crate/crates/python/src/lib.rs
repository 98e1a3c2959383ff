use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use satotate_core::equidistribution::{ks_statistic, sample_traces, semicircle_cdf};
use satotate_core::frobenius::{ribet_identity_check, CoefficientTable, EllipticCurve};
use satotate_core::haar_moments::{moment_table, su2_trace_moment};
use satotate_core::st_group::{enumerate_irreps, STGroupSpec};
use satotate_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(_) | Error::Numerical(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn load_spec(spec_json: &str) -> PyResult<STGroupSpec> {
    STGroupSpec::load(spec_json).map_err(py_err)
}

/// `E[tr(g)^n]` over SU(2) as a decimal string (an integer: 0 or a Catalan number).
#[pyfunction]
fn su2_moment(n: u32) -> String {
    su2_trace_moment(n).to_string()
}

/// Exact and Monte Carlo moment table for a spec given as JSON, returned as CSV text.
#[pyfunction]
#[pyo3(signature = (spec_json, n_max, mc_samples, seed))]
fn moments_csv(py: Python<'_>, spec_json: &str, n_max: u32, mc_samples: u64, seed: u64) -> PyResult<String> {
    let spec = load_spec(spec_json)?;
    let table = py.detach(|| moment_table(&spec, n_max, mc_samples, seed));
    let mut buf = Vec::new();
    table.write_csv(&mut buf).map_err(|e| py_err(e.into()))?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

/// `n` Haar-random traces as `(component_class, re, im)` tuples.
#[pyfunction]
fn sample(py: Python<'_>, spec_json: &str, n: u64, seed: u64) -> PyResult<Vec<(Option<usize>, f64, f64)>> {
    let spec = load_spec(spec_json)?;
    let samples = py.detach(|| sample_traces(&spec, n, seed));
    Ok(samples.into_iter().map(|s| (s.class, s.t.re, s.t.im)).collect())
}

/// Irrep labels up to `e_max` as `(e, eta_index, eta_degree)`.
#[pyfunction]
fn irreps(spec_json: &str, e_max: u32) -> PyResult<Vec<(Vec<u32>, usize, usize)>> {
    let spec = load_spec(spec_json)?;
    let labels = enumerate_irreps(&spec, e_max).map_err(py_err)?;
    Ok(labels.into_iter().map(|l| (l.e, l.eta_index, l.eta_degree)).collect())
}

/// `(p, a_p)` for good primes up to `bound` on the curve with coefficients `[a1, a2, a3, a4, a6]`.
#[pyfunction]
fn curve_traces(py: Python<'_>, a: [i64; 5], bound: u64) -> PyResult<Vec<(u64, i64)>> {
    let curve = EllipticCurve::new(a).map_err(py_err)?;
    let (aps, _) = py
        .detach(|| curve.traces(bound, bound.max(satotate_core::frobenius::DEFAULT_PRIME_CAP)))
        .map_err(py_err)?;
    Ok(aps)
}

/// KS distance of normalized traces from the semicircle law.
#[pyfunction]
fn ks_semicircle(samples: Vec<f64>) -> PyResult<f64> {
    ks_statistic(&samples, semicircle_cdf).map_err(py_err)
}

/// Runs the inner-twist identity on a coefficient table; returns `(checked, failing primes)`.
#[pyfunction]
fn ribet_check(path: PathBuf) -> PyResult<(usize, Vec<u64>)> {
    let table = CoefficientTable::load(&path).map_err(py_err)?;
    let report = ribet_identity_check(&table);
    Ok((report.checked, report.failures.iter().map(|f| f.p).collect()))
}

#[pymodule]
fn satotate(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(su2_moment, m)?)?;
    m.add_function(wrap_pyfunction!(moments_csv, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(irreps, m)?)?;
    m.add_function(wrap_pyfunction!(curve_traces, m)?)?;
    m.add_function(wrap_pyfunction!(ks_semicircle, m)?)?;
    m.add_function(wrap_pyfunction!(ribet_check, m)?)?;
    Ok(())
}
