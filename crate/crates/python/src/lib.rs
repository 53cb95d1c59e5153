//! Python module `mhmw`.
//!
//! Thin wrappers: parameters in, floats or lists of dicts out. Crossings
//! raise `CrossingError`, bad inputs `ValueError`, numerical failures
//! `ArithmeticError`.

use std::f64::consts::TAU;

use mhmw_core::currents::{
    byers_yang_current, landau_current_closed, landau_current_closed_verbatim, ring_current_closed, CurrentResult,
    LandauPhaseSpectrum, OccupationSet, RingPhaseSpectrum, DEFAULT_STEP,
};
use mhmw_core::landau::{energy_asymptotic, spectrum_table, LandauChannel, LandauSource, LevelMethod, DEFAULT_REL_TOL};
use mhmw_core::model::{derive, DerivedParams, Spin};
use mhmw_core::ring::{ring_energy, RingSystem};
use mhmw_core::{specfun, verify, Error};
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(mhmw, CrossingError, PyArithmeticError);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Crossing { .. } => CrossingError::new_err(e.to_string()),
        e if e.exit_code() == 2 => PyValueError::new_err(e.to_string()),
        e => PyArithmeticError::new_err(e.to_string()),
    }
}

fn spin(s: i32) -> PyResult<Spin> {
    Spin::from_i32(s).map_err(py_err)
}

fn occupation(text: &str) -> PyResult<OccupationSet> {
    text.parse().map_err(py_err)
}

/// Physical inputs: mass, dipole moment, charge density, cavity radius, optional ring radius.
#[pyclass(name = "SystemParams", frozen)]
struct PySystemParams {
    inner: mhmw_core::model::SystemParams,
}

#[pymethods]
impl PySystemParams {
    #[new]
    #[pyo3(signature = (m, d, rho_m, r0, ring_radius=None))]
    fn new(m: f64, d: f64, rho_m: f64, r0: f64, ring_radius: Option<f64>) -> PyResult<Self> {
        let mut inner = mhmw_core::model::SystemParams::new(m, d, rho_m, r0).map_err(py_err)?;
        if let Some(r) = ring_radius {
            inner = inner.with_ring_radius(r).map_err(py_err)?;
        }
        Ok(Self { inner })
    }

    #[getter]
    fn varpi(&self) -> f64 {
        self.inner.varpi()
    }

    /// (varpi, phi, y0) for spin s.
    fn derive(&self, s: i32) -> PyResult<(f64, f64, f64)> {
        let d = derive(&self.inner, spin(s)?);
        Ok((d.varpi, d.phi_mhmw, d.y0))
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!("SystemParams(m={}, d={}, rho_m={}, r0={}, ring_radius={:?})", p.m, p.d, p.rho_m, p.r0, p.ring_radius)
    }
}

/// Landau level on the asymptotic ladder.
#[pyfunction]
fn landau_energy_asymptotic(n: u32, l: i64, s: i32, varpi: f64, phi: f64) -> PyResult<f64> {
    Ok(energy_asymptotic(n, l, spin(s)?, varpi, phi))
}

/// n-th root of the wall condition for a channel with γ given directly.
#[pyfunction]
#[pyo3(signature = (n, gamma, s, varpi, y0, m=1.0, rel_tol=DEFAULT_REL_TOL))]
fn landau_energy_exact(n: u32, gamma: f64, s: i32, varpi: f64, y0: f64, m: f64, rel_tol: f64) -> PyResult<f64> {
    LandauChannel::decoupled(gamma, spin(s)?, varpi, m, y0)
        .energy_exact(n, rel_tol)
        .map_err(py_err)
}

/// Table of Landau levels for a physical system; `method` is "asymptotic" or "exact".
#[pyfunction]
#[pyo3(signature = (params, n_max=3, l_min=-3, l_max=3, method="asymptotic"))]
fn landau_spectrum<'py>(
    py: Python<'py>,
    params: &PySystemParams,
    n_max: u32,
    l_min: i64,
    l_max: i64,
    method: &str,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let method: LevelMethod = method.parse().map_err(py_err)?;
    let table = spectrum_table(
        0..=n_max,
        l_min..=l_max,
        &Spin::BOTH,
        &LandauSource::Physical(params.inner),
        method,
        DEFAULT_REL_TOL,
    )
    .map_err(py_err)?;
    table
        .rows
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("n", r.state.n)?;
            d.set_item("l", r.state.l)?;
            d.set_item("s", r.state.s.as_i32())?;
            d.set_item("gamma", r.gamma)?;
            d.set_item("energy", r.energy)?;
            Ok(d)
        })
        .collect()
}

/// Ring level E_l for spin s at phase phi.
#[pyfunction]
fn ring_level(l: i64, s: i32, m: f64, varpi: f64, radius: f64, phi: f64) -> PyResult<f64> {
    let system = RingSystem::decoupled(m, varpi, radius).map_err(py_err)?;
    Ok(ring_energy(l, spin(s)?, &system, phi).map_err(py_err)?.energy)
}

fn current_tuple(r: CurrentResult) -> (f64, bool) {
    (r.value, r.near_crossing)
}

/// Landau spin current for an occupation like "0:1:+1;1:-2:+1".
///
/// `method` is "closed_form", "verbatim" or "byers_yang". Returns (value, near_crossing).
#[pyfunction]
#[pyo3(signature = (occupied, phi, varpi, method="closed_form"))]
fn landau_current(occupied: &str, phi: f64, varpi: f64, method: &str) -> PyResult<(f64, bool)> {
    let occ = occupation(occupied)?;
    let r = match method {
        "closed_form" => landau_current_closed(&occ, phi, varpi),
        "verbatim" => landau_current_closed_verbatim(&occ, phi, varpi),
        "byers_yang" => byers_yang_current(&LandauPhaseSpectrum { varpi }, &occ, phi, DEFAULT_STEP),
        other => return Err(PyValueError::new_err(format!("unknown method '{other}'"))),
    };
    r.map(current_tuple).map_err(py_err)
}

/// Ring spin current for an occupation like "0:+1;1:-1".
#[pyfunction]
#[pyo3(signature = (occupied, phi, m, varpi, radius, method="closed_form"))]
fn ring_current(occupied: &str, phi: f64, m: f64, varpi: f64, radius: f64, method: &str) -> PyResult<(f64, bool)> {
    let occ = occupation(occupied)?;
    let system = RingSystem::decoupled(m, varpi, radius).map_err(py_err)?;
    let r = match method {
        "closed_form" => ring_current_closed(&occ, phi, &system),
        "byers_yang" => byers_yang_current(&RingPhaseSpectrum { system }, &occ, phi, DEFAULT_STEP),
        other => return Err(PyValueError::new_err(format!("unknown method '{other}'"))),
    };
    r.map(current_tuple).map_err(py_err)
}

/// Check that (varpi, phi_over_2pi, y0) form a valid decoupled input set.
#[pyfunction]
fn decoupled_phase(varpi: f64, phi_over_2pi: f64, y0: f64) -> PyResult<f64> {
    DerivedParams::decoupled(varpi, TAU * phi_over_2pi, y0)
        .map(|d| d.phi_mhmw)
        .map_err(py_err)
}

#[pyfunction]
fn tricomi_u(a: f64, b: f64, y: f64) -> PyResult<f64> {
    Ok(specfun::tricomi_u(a, b, y).map_err(py_err)?.value)
}

#[pyfunction]
fn kummer_m(a: f64, b: f64, y: f64) -> PyResult<f64> {
    Ok(specfun::kummer_m(a, b, y).map_err(py_err)?.value)
}

/// (ln|Γ(x)|, sign Γ(x)).
#[pyfunction]
fn ln_gamma(x: f64) -> PyResult<(f64, f64)> {
    let r = specfun::ln_gamma(x).map_err(py_err)?;
    Ok((r.value, r.sign))
}

/// Run the acceptance checks; returns a list of (id, passed, line).
#[pyfunction]
#[pyo3(signature = (level="quick"))]
fn run_verify(py: Python<'_>, level: &str) -> PyResult<Vec<(u8, bool, String)>> {
    let level: verify::Level = level.parse().map_err(py_err)?;
    let report = py.detach(|| verify::run(level));
    Ok(report.outcomes.iter().map(|o| (o.id, o.passed, o.to_string())).collect())
}

#[pymodule]
fn mhmw(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CrossingError", m.py().get_type::<CrossingError>())?;
    m.add_class::<PySystemParams>()?;
    m.add_function(wrap_pyfunction!(landau_energy_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(landau_energy_exact, m)?)?;
    m.add_function(wrap_pyfunction!(landau_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(ring_level, m)?)?;
    m.add_function(wrap_pyfunction!(landau_current, m)?)?;
    m.add_function(wrap_pyfunction!(ring_current, m)?)?;
    m.add_function(wrap_pyfunction!(decoupled_phase, m)?)?;
    m.add_function(wrap_pyfunction!(tricomi_u, m)?)?;
    m.add_function(wrap_pyfunction!(kummer_m, m)?)?;
    m.add_function(wrap_pyfunction!(ln_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
