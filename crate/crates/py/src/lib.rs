//! Python bindings for `sphervol-core`.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use sphervol_core as core;
use sphervol_core::z2::DEFAULT_Z2_TOL;
use sphervol_core::{DihedralAngles, EdgeLengths, Z2Angles, Z2Lengths};

create_exception!(
    sphervol,
    NumericalError,
    PyException,
    "A valid input hit a numerical breakdown."
);

fn to_py(e: core::Error) -> PyErr {
    let msg = format!("{}: {e}", e.kind());
    if e.is_input_error() {
        PyValueError::new_err(msg)
    } else {
        NumericalError::new_err(msg)
    }
}

fn fixed<const N: usize>(v: &[f64], what: &str) -> PyResult<[f64; N]> {
    v.try_into()
        .map_err(|_| PyValueError::new_err(format!("{what} takes {N} values, got {}", v.len())))
}

/// Z2 lengths from four values, or from six that are symmetric within `tol`.
fn z2_from(lengths: &[f64], tol: f64) -> PyResult<Z2Lengths> {
    match lengths.len() {
        4 => Z2Lengths::from_array(fixed(lengths, "lengths")?).map_err(to_py),
        6 => {
            let l = EdgeLengths::new(fixed(lengths, "lengths")?).map_err(to_py)?;
            core::detect_z2(&l, tol).ok_or_else(|| to_py(core::Error::NotZ2 { tol }))
        }
        n => Err(PyValueError::new_err(format!(
            "lengths takes 4 or 6 values, got {n}"
        ))),
    }
}

fn edge_lengths_from(lengths: &[f64]) -> PyResult<EdgeLengths> {
    match lengths.len() {
        4 => Ok(z2_from(lengths, DEFAULT_Z2_TOL)?.edge_lengths()),
        _ => EdgeLengths::new(fixed(lengths, "lengths")?).map_err(to_py),
    }
}

#[pyclass(frozen, get_all, module = "sphervol")]
pub struct VolumeResult {
    volume: f64,
    case: String,
    path: String,
    u: f64,
    t_squared: f64,
    h_term: f64,
    i_term: f64,
    diagnostics: BTreeMap<String, f64>,
}

#[pymethods]
impl VolumeResult {
    fn __repr__(&self) -> String {
        format!(
            "VolumeResult(volume={:?}, case='{}', path='{}', u={:?}, t_squared={:?})",
            self.volume, self.case, self.path, self.u, self.t_squared
        )
    }
}

impl From<core::VolumeResult> for VolumeResult {
    fn from(r: core::VolumeResult) -> Self {
        VolumeResult {
            volume: r.volume,
            case: r.case.to_string(),
            path: r.path.to_string(),
            u: r.u,
            t_squared: r.t_squared,
            h_term: r.h_term,
            i_term: r.i_term,
            diagnostics: r.diagnostics,
        }
    }
}

/// Volume from four Z2 lengths `(l_A, l_B, l_C, l_D)` or six edge lengths.
#[pyfunction]
#[pyo3(signature = (lengths, tol = DEFAULT_Z2_TOL))]
fn volume(lengths: Vec<f64>, tol: f64) -> PyResult<VolumeResult> {
    let z = z2_from(&lengths, tol)?;
    core::volume(&z).map(Into::into).map_err(to_py)
}

/// Dihedral angles in the same layout as the input (four Z2 or six).
#[pyfunction]
fn angles_from_lengths(lengths: Vec<f64>) -> PyResult<Vec<f64>> {
    if lengths.len() == 4 {
        let a = z2_from(&lengths, DEFAULT_Z2_TOL)?.angles().map_err(to_py)?;
        return Ok(vec![a.a, a.b, a.c, a.d]);
    }
    let l = EdgeLengths::new(fixed(&lengths, "lengths")?).map_err(to_py)?;
    Ok(core::angles_from_lengths(&l)
        .map_err(to_py)?
        .values()
        .to_vec())
}

/// Edge lengths in the same layout as the input (four Z2 or six).
#[pyfunction]
fn lengths_from_angles(angles: Vec<f64>) -> PyResult<Vec<f64>> {
    if angles.len() == 4 {
        let a = Z2Angles {
            a: angles[0],
            b: angles[1],
            c: angles[2],
            d: angles[3],
        };
        return Ok(Z2Lengths::from_angles(a).map_err(to_py)?.values().to_vec());
    }
    let a = DihedralAngles::new(fixed(&angles, "angles")?).map_err(to_py)?;
    Ok(core::lengths_from_angles(&a)
        .map_err(to_py)?
        .values()
        .to_vec())
}

#[pyfunction]
fn v_eval(ell: f64, u: f64) -> PyResult<f64> {
    core::v_eval(ell, u).map(|e| e.value).map_err(to_py)
}

/// Six edge lengths `(A, ..., F)` if they are Z2-symmetric within `tol`,
/// returned as `(l_A, l_B, l_C, l_D)`, else `None`.
#[pyfunction]
#[pyo3(signature = (lengths, tol = DEFAULT_Z2_TOL))]
fn detect_z2(lengths: Vec<f64>, tol: f64) -> PyResult<Option<Vec<f64>>> {
    let l = EdgeLengths::new(fixed(&lengths, "lengths")?).map_err(to_py)?;
    Ok(core::detect_z2(&l, tol).map(|z| z.values().to_vec()))
}

/// Monte Carlo estimate as a dict with `volume`, `std_error`, `samples`,
/// `hits`, `seed`.
#[pyfunction]
#[pyo3(signature = (lengths, samples = 1_000_000, seed = 0))]
fn mc_volume(
    py: Python<'_>,
    lengths: Vec<f64>,
    samples: u64,
    seed: u64,
) -> PyResult<Bound<'_, PyDict>> {
    let l = edge_lengths_from(&lengths)?;
    let e = py
        .detach(|| core::mc_volume(&l, samples, seed))
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("volume", e.volume)?;
    d.set_item("std_error", e.std_error)?;
    d.set_item("samples", e.samples)?;
    d.set_item("hits", e.hits)?;
    d.set_item("seed", e.seed)?;
    Ok(d)
}

/// Volume by integrating the Schläfli differential from the right-angled
/// tetrahedron.
#[pyfunction]
#[pyo3(signature = (lengths, steps = 10_000))]
fn schlafli_volume(py: Python<'_>, lengths: Vec<f64>, steps: usize) -> PyResult<f64> {
    let z = z2_from(&lengths, DEFAULT_Z2_TOL)?;
    py.detach(|| core::schlafli_volume(&z, steps))
        .map(|p| p.volume)
        .map_err(to_py)
}

#[pymodule]
pub fn sphervol(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<VolumeResult>()?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_function(wrap_pyfunction!(volume, m)?)?;
    m.add_function(wrap_pyfunction!(angles_from_lengths, m)?)?;
    m.add_function(wrap_pyfunction!(lengths_from_angles, m)?)?;
    m.add_function(wrap_pyfunction!(v_eval, m)?)?;
    m.add_function(wrap_pyfunction!(detect_z2, m)?)?;
    m.add_function(wrap_pyfunction!(mc_volume, m)?)?;
    m.add_function(wrap_pyfunction!(schlafli_volume, m)?)?;
    Ok(())
}
