//! Python bindings. Structured results come back as plain dicts and lists.

use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use hermcodes::acceptance::{self, Status};
use hermcodes::bounds;
use hermcodes::codes::{self, CodeMatrix, DistanceMethod, ENUM_GUARD};
use hermcodes::curve::{Hermitian, Place3};
use hermcodes::ff::ConwayTable;
use hermcodes::gaps;
use hermcodes::witness7::{self, LiftSystem, WitnessInput};
use hermcodes::Error;

fn err(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        Error::Consistency(_) => PyRuntimeError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

fn load_table(path: Option<PathBuf>) -> PyResult<ConwayTable> {
    match path {
        Some(p) => ConwayTable::load(&p),
        None => ConwayTable::from_env_or_builtin(),
    }
    .map_err(err)
}

/// The Hermitian curve over GF(q^2) with one chosen degree-3 place.
#[pyclass(unsendable, module = "hermcodes")]
struct Curve {
    h: Hermitian,
    place: Place3,
}

#[pymethods]
impl Curve {
    /// `seed` picks a random degree-3 place; without it the first one is used.
    #[new]
    #[pyo3(signature = (q, seed=None, conway_table=None))]
    fn new(q: u32, seed: Option<u64>, conway_table: Option<PathBuf>) -> PyResult<Self> {
        let table = load_table(conway_table)?;
        let h = Hermitian::new(q, &table).map_err(err)?;
        let place = h.place_by_seed(seed).map_err(err)?;
        Ok(Curve { h, place })
    }

    #[getter]
    fn q(&self) -> u32 {
        self.h.q()
    }

    #[getter]
    fn genus(&self) -> i64 {
        bounds::genus(self.h.q())
    }

    /// Gap set at the place, computed from Riemann-Roch dimensions.
    fn gaps<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &gaps::gap_set_oracle(&self.h, &self.place).map_err(err)?)
    }

    /// Generator matrix of C_L(D, A_1), C_L(D, mP) or C_L(D, A_2).
    #[pyo3(signature = (m, divisor="a1"))]
    fn build_code(&self, m: u32, divisor: &str) -> PyResult<Code> {
        let c = match divisor.to_ascii_lowercase().as_str() {
            "a1" => codes::build_cl_a1(&self.h, &self.place, m),
            "mp" => codes::build_cl_mp(&self.h, &self.place, m),
            "a2" => codes::build_cl_a2(&self.h, &self.place, m),
            other => return Err(PyValueError::new_err(format!("unknown divisor `{other}`, expected a1, mp or a2"))),
        }
        .map_err(err)?;
        Ok(Code { inner: c })
    }

    /// Residue-scaled orthogonality of C_L(D, A_1) against C_L(D, mP).
    #[pyo3(signature = (m, guard_override=false))]
    fn duality_check<'py>(&self, py: Python<'py>, m: u32, guard_override: bool) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &codes::duality_check(&self.h, &self.place, m, guard_override).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("Curve(q={})", self.h.q())
    }
}

/// A generator matrix. Entries are powers of the primitive element, -1 for zero.
#[pyclass(unsendable, module = "hermcodes")]
struct Code {
    inner: CodeMatrix,
}

#[pymethods]
impl Code {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.m
    }

    fn rows(&self) -> Vec<Vec<i64>> {
        self.inner.to_json().rows
    }

    /// Evaluation points as `[x, y]` power codes.
    fn columns(&self) -> Vec<[i64; 2]> {
        self.inner.to_json().columns
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.to_json()).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    /// Exact minimum distance; `method` is full, dual or auto.
    #[pyo3(signature = (method="auto", guard_override=false))]
    fn min_distance<'py>(&self, py: Python<'py>, method: &str, guard_override: bool) -> PyResult<Bound<'py, PyAny>> {
        let method = match method {
            "full" => DistanceMethod::Full,
            "dual" => DistanceMethod::Dual,
            "auto" => DistanceMethod::Auto,
            other => return Err(PyValueError::new_err(format!("unknown method `{other}`"))),
        };
        let guard = if guard_override { u64::MAX } else { ENUM_GUARD };
        let g = &self.inner.generator;
        let res = py.detach(|| codes::min_distance_exact(g, method, guard)).map_err(err)?;
        to_py(py, &res)
    }

    fn __repr__(&self) -> String {
        format!("Code(q={}, m={}, tag={:?}, n={}, k={})", self.inner.q, self.inner.m, self.inner.tag, self.n(), self.k())
    }
}

/// Every bound for C_L(D, A_1) at (q, m).
#[pyfunction]
fn bounds_report<'py>(py: Python<'py>, q: u32, m: u32) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &bounds::report(q, m).map_err(err)?)
}

/// Values of m where the three-case bound beats the one-point code.
#[pyfunction]
fn improvement_table(q: u32) -> PyResult<Vec<u32>> {
    bounds::improvement_table(q).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (qs=None))]
fn table_csv(qs: Option<Vec<u32>>) -> PyResult<String> {
    bounds::table_csv(&qs.unwrap_or_else(|| bounds::TABLE_QS.to_vec())).map_err(err)
}

/// Closed-form gap set at a degree-3 place.
#[pyfunction]
fn gap_set<'py>(py: Python<'py>, q: u32) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &gaps::gap_set_formula(q))
}

/// Solve the q=7 witness lift and run its checks. `input` is an optional JSON file.
#[pyfunction]
#[pyo3(signature = (system="reduced", orthogonality=true, input=None, conway_table=None))]
fn verify_witness<'py>(
    py: Python<'py>,
    system: &str,
    orthogonality: bool,
    input: Option<PathBuf>,
    conway_table: Option<PathBuf>,
) -> PyResult<Bound<'py, PyAny>> {
    let system = match system {
        "reduced" => LiftSystem::Reduced,
        "full" => LiftSystem::Full,
        other => return Err(PyValueError::new_err(format!("unknown system `{other}`"))),
    };
    let table = load_table(conway_table)?;
    let (h, inp) = match input {
        Some(p) => {
            let inp = WitnessInput::from_json_file(&p).map_err(err)?;
            (Hermitian::new(inp.q, &table).map_err(err)?, inp)
        }
        None => witness7::embedded_setup(&table).map_err(err)?,
    };
    to_py(py, &witness7::verify(&h, &inp, system, orthogonality).map_err(err)?)
}

/// Run the acceptance checks; returns `(id, status, detail)` per check.
#[pyfunction]
#[pyo3(signature = (seed=20240611, conway_table=None))]
fn selftest(seed: u64, conway_table: Option<PathBuf>) -> PyResult<Vec<(u8, &'static str, String)>> {
    let table = load_table(conway_table)?;
    Ok(acceptance::run_all(&table, seed)
        .into_iter()
        .map(|o| {
            let s = match o.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            (o.id, s, o.detail)
        })
        .collect())
}

#[pymodule]
#[pyo3(name = "hermcodes")]
fn hermcodes_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Curve>()?;
    m.add_class::<Code>()?;
    m.add_function(wrap_pyfunction!(bounds_report, m)?)?;
    m.add_function(wrap_pyfunction!(improvement_table, m)?)?;
    m.add_function(wrap_pyfunction!(table_csv, m)?)?;
    m.add_function(wrap_pyfunction!(gap_set, m)?)?;
    m.add_function(wrap_pyfunction!(verify_witness, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
