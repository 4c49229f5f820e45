//! Python bindings: teams and dependency checks, finite algebra independence,
//! and the atomless Boolean algebra workbench.
//!
//! Structured results come back as plain Python dicts built from the same
//! canonical JSON reports the command-line tool prints.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use teamind::algebra::{
    independence_fast, independence_oracles, OracleConfig, PartitionAlgebra, Universe,
    DEFAULT_CAP_ATOMS,
};
use teamind::atomless::{self, ClopenSet, WorkbenchError, DEFAULT_WINDOW};
use teamind::dsl::{self, DependencyAtom};
use teamind::report::{check_json, crosscheck_json, emit_report};
use teamind::team::{self, check_atom, verify_reduction, Format, Mode, Schema};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn workbench_error(e: WorkbenchError) -> PyErr {
    match e {
        WorkbenchError::ContractViolated(_) => PyRuntimeError::new_err(e.to_string()),
        _ => value_error(e),
    }
}

/// Parses a canonical JSON report into Python objects.
fn to_python<'py, T: serde::Serialize>(py: Python<'py>, report: &T) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (emit_report(report),))
}

fn parse(text: &str) -> PyResult<DependencyAtom> {
    dsl::parse_atom(text).map_err(value_error)
}

/// A team: a set of rows over named attributes, with duplicates dropped.
#[pyclass(name = "Team", frozen)]
struct PyTeam {
    inner: team::Team,
}

#[pymethods]
impl PyTeam {
    #[new]
    fn new(attributes: Vec<String>, rows: Vec<Vec<String>>) -> PyResult<Self> {
        let schema = Schema::new(attributes).map_err(value_error)?;
        let inner = team::Team::from_rows(schema, rows).map_err(value_error)?;
        Ok(PyTeam { inner })
    }

    /// Loads a CSV or JSON file; the format follows the extension unless given.
    #[staticmethod]
    #[pyo3(signature = (path, format = None))]
    fn load(path: PathBuf, format: Option<&str>) -> PyResult<Self> {
        let format = match format {
            Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(other) => return Err(value_error(format!("unknown format {other:?}"))),
            None => Format::from_path(&path),
        };
        let file = File::open(&path).map_err(value_error)?;
        let inner = team::load_team(BufReader::new(file), format).map_err(value_error)?;
        Ok(PyTeam { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn attributes(&self) -> Vec<String> {
        self.inner.schema().attributes().to_vec()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.inner.rows_as_strings()
    }

    /// Checks an atom such as "z ->> x | y"; mode is "fast" or "bruteforce".
    #[pyo3(signature = (atom, mode = "fast"))]
    fn check<'py>(&self, py: Python<'py>, atom: &str, mode: &str) -> PyResult<Bound<'py, PyAny>> {
        let mode = match mode {
            "fast" => Mode::Fast,
            "bruteforce" => Mode::Bruteforce,
            other => return Err(value_error(format!("unknown mode {other:?}"))),
        };
        let report = check_atom(&self.inner, &parse(atom)?, mode).map_err(value_error)?;
        to_python(py, &check_json(&report, false))
    }

    /// Runs every route for the EMVD behind an atom and reports agreement.
    #[pyo3(signature = (atom, cap_atoms = DEFAULT_CAP_ATOMS))]
    fn crosscheck<'py>(&self, py: Python<'py>, atom: &str, cap_atoms: usize) -> PyResult<Bound<'py, PyAny>> {
        let atom = parse(atom)?;
        let (z, x, y) = match &atom {
            DependencyAtom::Fd { x, y } => (x, y, y),
            DependencyAtom::Dep { u, v } => (u, v, v),
            DependencyAtom::Emvd { z, x, y } => (z, x, y),
            DependencyAtom::Ind { u, w, v } => (w, u, v),
        };
        let report = verify_reduction(&self.inner, z, x, y, &OracleConfig { cap_atoms })
            .map_err(value_error)?;
        to_python(py, &crosscheck_json(&atom, &report))
    }
}

/// Canonical text of a dependency atom.
#[pyfunction]
fn parse_atom(text: &str) -> PyResult<String> {
    Ok(parse(text)?.to_string())
}

/// Decides `A ⫫_C B` for partitions of `0..n` given as block labels per row.
#[pyfunction]
#[pyo3(signature = (a, b, c, cap_atoms = DEFAULT_CAP_ATOMS))]
fn independence<'py>(
    py: Python<'py>,
    a: Vec<u32>,
    b: Vec<u32>,
    c: Vec<u32>,
    cap_atoms: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let u = Universe::new(a.len());
    let algebra = |labels: &[u32]| PartitionAlgebra::from_labels(u, labels).map_err(value_error);
    let (a, b, c) = (algebra(&a)?, algebra(&b)?, algebra(&c)?);
    let fast = independence_fast(&a, &b, &c).map_err(value_error)?;
    let oracles = independence_oracles(&a, &b, &c, &OracleConfig { cap_atoms }).ok();
    to_python(
        py,
        &serde_json::json!({
            "independent": fast.independent,
            "oracles": oracles.map_or(serde_json::json!("skipped"), |o| serde_json::json!(o)),
        }),
    )
}

/// A clopen subset of Cantor space, written like "{00,10}"; "{}" is empty
/// and "{*}" is everything.
#[pyclass(name = "Clopen", frozen, eq, hash, str, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyClopen {
    inner: ClopenSet,
}

impl std::fmt::Display for PyClopen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.inner.fmt(f)
    }
}

fn wrap(inner: ClopenSet) -> PyClopen {
    PyClopen { inner }
}

fn unwrap_all(sets: &[PyRef<'_, PyClopen>]) -> Vec<ClopenSet> {
    sets.iter().map(|s| s.inner.clone()).collect()
}

#[pymethods]
impl PyClopen {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(wrap).map_err(workbench_error)
    }

    fn __repr__(&self) -> String {
        format!("Clopen({:?})", self.inner.to_string())
    }

    fn __and__(&self, other: PyRef<'_, Self>) -> Self {
        wrap(self.inner.meet(&other.inner))
    }

    fn __or__(&self, other: PyRef<'_, Self>) -> Self {
        wrap(self.inner.join(&other.inner))
    }

    fn __invert__(&self) -> Self {
        wrap(self.inner.complement())
    }

    fn meet(&self, other: PyRef<'_, Self>) -> Self {
        wrap(self.inner.meet(&other.inner))
    }

    fn join(&self, other: PyRef<'_, Self>) -> Self {
        wrap(self.inner.join(&other.inner))
    }

    fn complement(&self) -> Self {
        wrap(self.inner.complement())
    }

    fn leq(&self, other: PyRef<'_, Self>) -> bool {
        self.inner.leq(&other.inner)
    }

    fn lt(&self, other: PyRef<'_, Self>) -> bool {
        self.inner.lt(&other.inner)
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    #[getter]
    fn depth(&self) -> usize {
        self.inner.depth()
    }

    /// Maximal cylinders as "0"/"1" strings.
    #[getter]
    fn words(&self) -> Vec<String> {
        self.inner
            .words()
            .iter()
            .map(|w| w.iter().map(|&b| if b { '1' } else { '0' }).collect())
            .collect()
    }
}

/// `k` pairwise disjoint nonzero pieces strictly below `a`.
#[pyfunction]
fn split(a: PyRef<'_, PyClopen>, k: usize) -> PyResult<Vec<PyClopen>> {
    Ok(atomless::split(&a.inner, k)
        .map_err(workbench_error)?
        .into_iter()
        .map(wrap)
        .collect())
}

/// Sign vectors of the nonzero cells of `⟨tuple, base⟩`.
#[pyfunction]
#[pyo3(signature = (tuple, base = Vec::new()))]
fn qf_type(tuple: Vec<PyRef<'_, PyClopen>>, base: Vec<PyRef<'_, PyClopen>>) -> Vec<u64> {
    atomless::qf_type(&unwrap_all(&tuple), &unwrap_all(&base)).nonzero
}

#[pyfunction]
#[pyo3(signature = (seq, base = Vec::new(), window = DEFAULT_WINDOW))]
fn indiscernible<'py>(
    py: Python<'py>,
    seq: Vec<PyRef<'_, PyClopen>>,
    base: Vec<PyRef<'_, PyClopen>>,
    window: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let r = atomless::indiscernible_check(&unwrap_all(&seq), &unwrap_all(&base), window)
        .map_err(workbench_error)?;
    to_python(py, &r)
}

#[pyfunction]
#[pyo3(signature = (a, b, base = Vec::new(), n = 8))]
fn dividing_witness<'py>(
    py: Python<'py>,
    a: PyRef<'_, PyClopen>,
    b: PyRef<'_, PyClopen>,
    base: Vec<PyRef<'_, PyClopen>>,
    n: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let w = atomless::dividing_witness(&a.inner, &b.inner, &unwrap_all(&base), n)
        .map_err(workbench_error)?;
    to_python(py, &w)
}

#[pyfunction]
#[pyo3(signature = (b, base = Vec::new(), n = 8))]
fn disjoint_test_sequence(
    b: PyRef<'_, PyClopen>,
    base: Vec<PyRef<'_, PyClopen>>,
    n: usize,
) -> PyResult<Vec<PyClopen>> {
    let s = atomless::disjoint_test_sequence(&b.inner, &unwrap_all(&base), n)
        .map_err(workbench_error)?;
    Ok(s.sequence.into_iter().map(wrap).collect())
}

/// `a'` with the type of `a` over every `b_i`, keeping `seq` indiscernible.
#[pyfunction]
#[pyo3(signature = (a, seq, base = Vec::new(), window = DEFAULT_WINDOW))]
fn nonforking_extension(
    a: PyRef<'_, PyClopen>,
    seq: Vec<PyRef<'_, PyClopen>>,
    base: Vec<PyRef<'_, PyClopen>>,
    window: usize,
) -> PyResult<PyClopen> {
    let ext = atomless::nonforking_extension(&a.inner, &unwrap_all(&base), &unwrap_all(&seq), window)
        .map_err(workbench_error)?;
    Ok(wrap(ext.a_prime))
}

#[pyfunction]
#[pyo3(signature = (m = 6, n = 3))]
fn atba_demo(py: Python<'_>, m: usize, n: usize) -> PyResult<Bound<'_, PyAny>> {
    let r = atomless::atba_demo(m, n).map_err(workbench_error)?;
    to_python(py, &r)
}

#[pymodule]
fn pyteamind(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTeam>()?;
    m.add_class::<PyClopen>()?;
    m.add_function(wrap_pyfunction!(parse_atom, m)?)?;
    m.add_function(wrap_pyfunction!(independence, m)?)?;
    m.add_function(wrap_pyfunction!(split, m)?)?;
    m.add_function(wrap_pyfunction!(qf_type, m)?)?;
    m.add_function(wrap_pyfunction!(indiscernible, m)?)?;
    m.add_function(wrap_pyfunction!(dividing_witness, m)?)?;
    m.add_function(wrap_pyfunction!(disjoint_test_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(nonforking_extension, m)?)?;
    m.add_function(wrap_pyfunction!(atba_demo, m)?)?;
    Ok(())
}
