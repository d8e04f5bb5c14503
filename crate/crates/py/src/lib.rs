//! Python bindings: vectors, block sequences and combos as classes, plus the
//! span, rewriting, search and self-test operations as functions. Every
//! library error is raised as `FinlabError` with the text `Name: message`.

use finlab::coloring::Coloring;
use finlab::rewrite::{rewrite_into_tree, synth_tree, verify_certificate};
use finlab::scan::{scan_colorings, ScanParams};
use finlab::search::{find_witness, Neighborhood, SearchMode, SearchParams, Verdict};
use finlab::span::{self, Mode, DEFAULT_SPAN_BUDGET};
use finlab::{selftest, BlockSeq, Combo, FinError, FinVec};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyIndexError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(pyfinlab, FinlabError, PyException);

fn err(e: FinError) -> PyErr {
    FinlabError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr<Err = FinError>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

#[pyclass(name = "FinVec", module = "pyfinlab", frozen, from_py_object, eq, ord, hash)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct PyFinVec(FinVec);

#[pymethods]
impl PyFinVec {
    /// From a literal such as `"0:2,2:-1"`, or from `(index, value)` pairs.
    /// The bound defaults to the largest magnitude present.
    #[new]
    #[pyo3(signature = (value, k=None))]
    fn new(value: &Bound<'_, PyAny>, k: Option<u32>) -> PyResult<Self> {
        let v: FinVec = match value.extract::<String>() {
            Ok(s) => parse(&s)?,
            Err(_) => FinVec::from_entries(value.extract::<Vec<(u32, i32)>>()?).map_err(err)?,
        };
        Ok(PyFinVec(match k {
            Some(k) => v.with_k(k).map_err(err)?,
            None => v,
        }))
    }

    #[getter]
    fn k(&self) -> u32 {
        self.0.k()
    }

    fn entries(&self) -> Vec<(u32, i32)> {
        self.0.entries().to_vec()
    }

    fn support(&self) -> Vec<u32> {
        self.0.support()
    }

    fn amplitude(&self) -> u32 {
        self.0.amplitude()
    }

    fn attains(&self) -> bool {
        self.0.attains()
    }

    #[pyo3(signature = (j=1))]
    fn tetris(&self, j: u32) -> Self {
        PyFinVec(self.0.tetris_pow(j))
    }

    fn weak_tetris(&self) -> Self {
        PyFinVec(self.0.weak_tetris())
    }

    fn neg(&self) -> Self {
        PyFinVec(self.0.neg())
    }

    fn phi(&self, m: u32) -> PyResult<Self> {
        self.0.phi(m).map(PyFinVec).map_err(err)
    }

    fn psi(&self, k: u32) -> PyResult<Self> {
        self.0.psi(k).map(PyFinVec).map_err(err)
    }

    fn add(&self, other: &PyFinVec) -> PyResult<Self> {
        self.0.add(&other.0).map(PyFinVec).map_err(err)
    }

    fn dist(&self, other: &PyFinVec) -> u32 {
        self.0.dist(&other.0)
    }

    fn precedes(&self, other: &PyFinVec) -> bool {
        self.0.precedes(&other.0)
    }

    fn get(&self, n: u32) -> i32 {
        self.0.get(n)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("FinVec('{}', k={})", self.0, self.0.k())
    }
}

#[pyclass(name = "BlockSeq", module = "pyfinlab", frozen, from_py_object, eq, hash)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyBlockSeq(BlockSeq);

#[pymethods]
impl PyBlockSeq {
    /// From a literal such as `"0:2;1:-2"` or a list of `FinVec`.
    #[new]
    fn new(value: &Bound<'_, PyAny>) -> PyResult<Self> {
        match value.extract::<String>() {
            Ok(s) => Ok(PyBlockSeq(parse(&s)?)),
            Err(_) => {
                let blocks: Vec<PyFinVec> = value.extract()?;
                let blocks = blocks.into_iter().map(|b| b.0).collect();
                BlockSeq::from_blocks(blocks).map(PyBlockSeq).map_err(err)
            }
        }
    }

    #[getter]
    fn k(&self) -> u32 {
        self.0.k()
    }

    fn blocks(&self) -> Vec<PyFinVec> {
        self.0.iter().cloned().map(PyFinVec).collect()
    }

    fn dist(&self, other: &PyBlockSeq) -> PyResult<u32> {
        self.0.dist(&other.0).map_err(err)
    }

    fn psi(&self, k: u32) -> PyResult<Self> {
        self.0.psi(k).map(PyBlockSeq).map_err(err)
    }

    fn union(&self) -> PyFinVec {
        PyFinVec(self.0.union())
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __getitem__(&self, i: isize) -> PyResult<PyFinVec> {
        let n = self.0.len() as isize;
        let at = if i < 0 { i + n } else { i };
        self.0
            .get(at.max(0) as usize)
            .filter(|_| at >= 0)
            .map(|b| PyFinVec(b.clone()))
            .ok_or_else(|| PyIndexError::new_err(format!("block index {i} out of range")))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("BlockSeq('{}')", self.0)
    }
}

#[pyclass(name = "Combo", module = "pyfinlab", frozen, from_py_object, eq, ord, hash)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct PyCombo(Combo);

#[pymethods]
impl PyCombo {
    /// From a literal such as `"PM|0:+:0,1:-:1"` or `"NT|0:1,1:0"`.
    #[new]
    fn new(literal: &str) -> PyResult<Self> {
        Ok(PyCombo(parse(literal)?))
    }

    #[getter]
    fn mode(&self) -> String {
        self.0.mode().to_string()
    }

    /// `(index, sign, level)` with sign `+1` or `-1`.
    fn terms(&self) -> Vec<(usize, i32, u32)> {
        self.0.terms().iter().map(|t| (t.index, if t.sign == finlab::Sign::Plus { 1 } else { -1 }, t.level)).collect()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Combo('{}')", self.0)
    }
}

#[pyfunction]
fn combine(p: &PyBlockSeq, combo: &PyCombo) -> PyResult<PyFinVec> {
    span::combine(&p.0, &combo.0).map(PyFinVec).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (q, p, mode="pm"))]
fn decompose(q: &PyFinVec, p: &PyBlockSeq, mode: &str) -> PyResult<Option<PyCombo>> {
    Ok(span::decompose(&q.0, &p.0, parse(mode)?).map(PyCombo))
}

#[pyfunction]
#[pyo3(signature = (p, mode="pm", budget=None))]
fn enum_span(p: &PyBlockSeq, mode: &str, budget: Option<u128>) -> PyResult<Vec<PyFinVec>> {
    let mode: Mode = parse(mode)?;
    let span = span::enum_span_with_budget(&p.0, mode, budget.unwrap_or(DEFAULT_SPAN_BUDGET)).map_err(err)?;
    Ok(span.into_iter().map(PyFinVec).collect())
}

/// The closed-form span size, or `None` when it overflows.
#[pyfunction]
#[pyo3(signature = (m, k, mode="pm"))]
fn span_size(m: usize, k: u32, mode: &str) -> PyResult<Option<u128>> {
    Ok(span::span_size(m, k, parse(mode)?))
}

#[pyfunction]
fn enum_span_tuples(p: &PyBlockSeq, d: usize) -> PyResult<Vec<PyBlockSeq>> {
    let tuples = span::enum_span_tuples(&p.0, d).map_err(err)?;
    Ok(tuples.into_iter().map(PyBlockSeq).collect())
}

#[pyfunction]
fn is_block_subsequence(q: &PyBlockSeq, p: &PyBlockSeq) -> bool {
    span::is_block_subsequence(&q.0, &p.0).is_some()
}

/// Synthesises the S-closed tree for `p`, rewrites `q` into it and returns
/// `(output, max_dist, trace)`. The certificate is checked first.
#[pyfunction]
#[pyo3(signature = (q, p, depth=None))]
fn rewrite(q: &PyBlockSeq, p: &PyBlockSeq, depth: Option<usize>) -> PyResult<(PyBlockSeq, u32, String)> {
    // Literals infer their bound from the largest value; Q lives in P's span.
    let blocks = q.0.iter().map(|b| b.with_k(p.0.k())).collect::<Result<_, _>>().map_err(err)?;
    let q = BlockSeq::new(p.0.k(), blocks).map_err(err)?;
    let (u, cert) = synth_tree(&p.0, depth.unwrap_or(q.len())).map_err(err)?;
    let report = verify_certificate(&u, &cert);
    if let Some(v) = report.violations.first() {
        return Err(err(FinError::CertificateInsufficient(v.to_string())));
    }
    let trace = rewrite_into_tree(&q, &p.0, &u, &cert).map_err(err)?;
    Ok((PyBlockSeq(trace.output.clone()), trace.max_dist(), trace.to_string()))
}

/// Runs the witness search. Returns a dict with `verdict` (`"witness"`,
/// `"exhausted"` or `"budget-exceeded"`), `witness`, `color`, `cursor`,
/// `candidates_examined` and the full `report` text.
#[pyfunction]
#[pyo3(signature = (coloring, k=1, d=1, r=2, window=4, m=2, mode="approx", neighborhood="support-confined", budget=None, resume=None))]
#[allow(clippy::too_many_arguments)]
fn search<'py>(
    py: Python<'py>,
    coloring: &str,
    k: u32,
    d: usize,
    r: u32,
    window: u32,
    m: usize,
    mode: &str,
    neighborhood: &str,
    budget: Option<u64>,
    resume: Option<&PyBlockSeq>,
) -> PyResult<Bound<'py, PyDict>> {
    let mut params = SearchParams::new(k, d, r, window, m, parse::<SearchMode>(mode)?);
    params.neighborhood = parse::<Neighborhood>(neighborhood)?;
    if let Some(b) = budget {
        params.candidate_budget = b;
    }
    let c = Coloring::parse_spec(coloring, d).map_err(err)?;
    let report = py.detach(|| find_witness(&c, &params, resume.map(|p| &p.0))).map_err(err)?;
    let out = PyDict::new(py);
    let (verdict, witness, color, cursor) = match &report.verdict {
        Verdict::Witness { p, color } => ("witness", Some(PyBlockSeq(p.clone())), Some(*color), None),
        Verdict::Exhausted => ("exhausted", None, None, None),
        Verdict::BudgetExceeded { cursor } => ("budget-exceeded", None, None, Some(PyBlockSeq(cursor.clone()))),
    };
    out.set_item("verdict", verdict)?;
    out.set_item("witness", witness)?;
    out.set_item("color", color)?;
    out.set_item("cursor", cursor)?;
    out.set_item("candidates_examined", report.candidates_examined)?;
    out.set_item("report", report.to_text())?;
    Ok(out)
}

/// Exact FIN_1 colouring scan. Returns `(minimal_window, report)`.
#[pyfunction]
#[pyo3(signature = (r=2, m=2, max_window=4, symmetry=true))]
fn scan(py: Python<'_>, r: u32, m: usize, max_window: u32, symmetry: bool) -> PyResult<(Option<u32>, String)> {
    let mut params = ScanParams::exact_fin1(r, m, max_window);
    params.symmetry = symmetry;
    let report = py.detach(|| scan_colorings(&params)).map_err(err)?;
    Ok((report.minimal_window, report.to_text()))
}

/// Every invariant suite as `(name, cases, violations)`.
#[pyfunction]
#[pyo3(signature = (seed=7))]
fn run_selftest(py: Python<'_>, seed: u64) -> Vec<(String, u64, u64)> {
    py.detach(|| selftest::all_suites(seed)).into_iter().map(|s| (s.name.to_string(), s.cases, s.violations)).collect()
}

#[pymodule]
fn pyfinlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FinlabError", m.py().get_type::<FinlabError>())?;
    m.add_class::<PyFinVec>()?;
    m.add_class::<PyBlockSeq>()?;
    m.add_class::<PyCombo>()?;
    m.add_function(wrap_pyfunction!(combine, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(enum_span, m)?)?;
    m.add_function(wrap_pyfunction!(span_size, m)?)?;
    m.add_function(wrap_pyfunction!(enum_span_tuples, m)?)?;
    m.add_function(wrap_pyfunction!(is_block_subsequence, m)?)?;
    m.add_function(wrap_pyfunction!(rewrite, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(run_selftest, m)?)?;
    Ok(())
}
