//! Python bindings: build grammars and report MEMs from Python.

use std::fmt;

use ffmem::grammar::{self, DEFAULT_SEED};
use ffmem::{oracle, prmem, textio, Format, MemRecord, TextCollection};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

/// A string given either as `str` or as `bytes`.
#[derive(FromPyObject)]
enum Seq {
    Bytes(Vec<u8>),
    Text(String),
}

impl Seq {
    fn into_bytes(self) -> Vec<u8> {
        match self {
            Seq::Bytes(b) => b,
            Seq::Text(s) => s.into_bytes(),
        }
    }
}

fn to_py(e: ffmem::Error) -> PyErr {
    match e {
        ffmem::Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn collection(strings: Vec<Seq>) -> PyResult<TextCollection> {
    TextCollection::from_strings(strings.into_iter().map(Seq::into_bytes).collect::<Vec<_>>()).map_err(to_py)
}

/// One maximal exact match; string ids and positions are 1-based.
#[pyclass(name = "Mem", module = "ffmem", frozen, eq, ord, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct PyMem(MemRecord);

impl fmt::Display for PyMem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.0;
        write!(f, "Mem(sx={}, sy={}, px={}, py={}, len={})", r.sx, r.sy, r.px, r.py, r.len)
    }
}

#[pymethods]
impl PyMem {
    #[new]
    fn new(sx: usize, sy: usize, px: u64, py: u64, len: u64) -> Self {
        PyMem(MemRecord { sx, sy, px, py, len })
    }

    #[getter]
    fn sx(&self) -> usize {
        self.0.sx
    }

    #[getter]
    fn sy(&self) -> usize {
        self.0.sy
    }

    #[getter]
    fn px(&self) -> u64 {
        self.0.px
    }

    #[getter]
    fn py(&self) -> u64 {
        self.0.py
    }

    #[getter]
    fn len(&self) -> u64 {
        self.0.len
    }

    fn to_tuple(&self) -> (usize, usize, u64, u64, u64) {
        let r = &self.0;
        (r.sx, r.sy, r.px, r.py, r.len)
    }

    fn __repr__(&self) -> String {
        self.to_string()
    }
}

fn wrap(recs: Vec<MemRecord>) -> Vec<PyMem> {
    recs.into_iter().map(PyMem).collect()
}

/// A fix-free grammar over a string collection.
#[pyclass(name = "Grammar", module = "ffmem", frozen)]
struct PyGrammar(ffmem::Grammar);

#[pymethods]
impl PyGrammar {
    #[staticmethod]
    #[pyo3(signature = (strings, seed = DEFAULT_SEED))]
    fn build(py: Python<'_>, strings: Vec<Seq>, seed: u64) -> PyResult<Self> {
        let tc = collection(strings)?;
        Ok(PyGrammar(py.detach(|| ffmem::Grammar::build(&tc, seed))))
    }

    #[staticmethod]
    fn deserialize(data: &[u8]) -> PyResult<Self> {
        ffmem::Grammar::deserialize(data).map(PyGrammar).map_err(to_py)
    }

    fn serialize<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.0.serialize())
    }

    /// All MEMs of length at least `tau`.
    #[pyo3(signature = (tau, simplify = true))]
    fn mems(&self, py: Python<'_>, tau: u64, simplify: bool) -> Vec<PyMem> {
        wrap(py.detach(|| ffmem::mems_from_grammar(&self.0, tau, simplify)))
    }

    /// Primary-MEM tuples `(x, y, ox, oy, len)` before reporting.
    fn prmems(&self, py: Python<'_>, tau: u64) -> Vec<(u32, u32, i64, i64, u64)> {
        py.detach(|| prmem::find_prmems(&self.0, tau)).into_iter().map(|t| (t.x, t.y, t.ox, t.oy, t.len)).collect()
    }

    /// The input strings, decompressed.
    fn expand<'py>(&self, py: Python<'py>) -> Vec<Bound<'py, PyBytes>> {
        self.0.expand_strings().iter().map(|s| PyBytes::new(py, s)).collect()
    }

    #[getter]
    fn height(&self) -> usize {
        self.0.height()
    }

    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    #[getter]
    fn num_rules(&self) -> usize {
        self.0.num_rules()
    }

    #[getter]
    fn text_len(&self) -> u64 {
        self.0.text_len()
    }

    #[getter]
    fn ids(&self) -> Vec<String> {
        self.0.ids.clone()
    }

    fn is_fully_balanced(&self) -> bool {
        self.0.is_fully_balanced()
    }

    fn __repr__(&self) -> String {
        format!("Grammar({})", ffmem::cli::stats_line(&self.0))
    }
}

/// Builds a grammar and reports its MEMs in one call.
#[pyfunction]
#[pyo3(signature = (strings, tau, seed = DEFAULT_SEED))]
fn find_mems(py: Python<'_>, strings: Vec<Seq>, tau: u64, seed: u64) -> PyResult<Vec<PyMem>> {
    let tc = collection(strings)?;
    Ok(wrap(py.detach(|| ffmem::find_mems(&tc, tau, seed))))
}

/// Reference MEMs straight from the definition.
#[pyfunction]
fn brute_mems(py: Python<'_>, strings: Vec<Seq>, tau: u64) -> PyResult<Vec<PyMem>> {
    let tc = collection(strings)?;
    Ok(wrap(py.detach(|| oracle::brute_mems(&tc, tau))))
}

/// Reads a FASTA or one-string-per-line file into `(ids, strings)`.
#[pyfunction]
#[pyo3(signature = (path, format = "fasta"))]
fn load<'py>(py: Python<'py>, path: &str, format: &str) -> PyResult<(Vec<String>, Vec<Bound<'py, PyBytes>>)> {
    let format: Format = format.parse().map_err(to_py)?;
    let tc = textio::load(path, format).map_err(to_py)?;
    Ok((tc.ids, tc.strings.iter().map(|s| PyBytes::new(py, s)).collect()))
}

#[pymodule(name = "ffmem")]
fn ffmem_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMem>()?;
    m.add_class::<PyGrammar>()?;
    m.add_function(wrap_pyfunction!(find_mems, m)?)?;
    m.add_function(wrap_pyfunction!(brute_mems, m)?)?;
    m.add_function(wrap_pyfunction!(load, m)?)?;
    m.add("DEFAULT_SEED", DEFAULT_SEED)?;
    m.add("SIGMA", grammar::SIGMA)?;
    Ok(())
}
