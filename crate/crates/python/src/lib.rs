//! Python bindings: words, equation systems, spectra and the reproduction run.
//!
//! Exact rationals cross the boundary as `fractions.Fraction`.

use conserved_moments::config::Budget;
use conserved_moments::oracle::{make_field, oracle_report, QuadratureGrid, ScalarProfile};
use conserved_moments::reproduce::{reproduce as run_reproduce, ReproduceOptions};
use conserved_moments::spectral::{self, SpectrumOptions};
use conserved_moments::system::{self as sys, SystemReport};
use conserved_moments::word::{self, MultisetWord};
use conserved_moments::Error;
use num_rational::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyList;

fn to_py(e: Error) -> PyErr {
    if e.is_usage() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn parse(word: &str) -> PyResult<MultisetWord> {
    word.parse::<MultisetWord>().map_err(to_py)
}

fn fraction<'py>(py: Python<'py>, q: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.to_string(),))
}

/// Multiset word over `a..z`, written `"aab"` or `"a2b1"`.
#[pyclass(name = "Word", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyWord(MultisetWord);

#[pymethods]
impl PyWord {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse(text).map(Self)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word({:?})", self.0.to_string())
    }

    #[getter]
    fn counts(&self) -> Vec<u32> {
        self.0.counts().to_vec()
    }

    fn run_length(&self) -> String {
        self.0.to_run_length()
    }

    fn contains(&self, other: &PyWord) -> bool {
        self.0.contains(&other.0)
    }
}

/// Rank, nullity and exact nullspace of one equation system.
#[pyclass(name = "Verdict", frozen)]
struct PyVerdict(sys::Verdict);

#[pymethods]
impl PyVerdict {
    #[getter]
    fn rank(&self) -> usize {
        self.0.rank
    }

    #[getter]
    fn nullity(&self) -> usize {
        self.0.nullity
    }

    #[getter]
    fn conjecture_applicable(&self) -> bool {
        self.0.conjecture_applicable
    }

    #[getter]
    fn all_moments_zero(&self) -> bool {
        self.0.all_moments_zero
    }

    #[getter]
    fn nullspace<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let out = PyList::empty(py);
        for v in &self.0.nullspace_basis {
            let row = PyList::empty(py);
            for q in v {
                row.append(fraction(py, q)?)?;
            }
            out.append(row)?;
        }
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!(
            "Verdict(rank={}, nullity={}, all_moments_zero={})",
            self.0.rank, self.0.nullity, self.0.all_moments_zero
        )
    }
}

/// Linear system satisfied by the moments of a conserved symmetric tensor.
#[pyclass(name = "EquationSystem", frozen)]
struct PySystem(sys::EquationSystem);

#[pymethods]
impl PySystem {
    #[new]
    fn new(word: &str, k: usize) -> PyResult<Self> {
        sys::build_system(&parse(word)?, k).map(Self).map_err(to_py)
    }

    #[getter]
    fn word(&self) -> String {
        self.0.word.to_string()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k
    }

    #[getter]
    fn unknowns(&self) -> Vec<String> {
        self.0.unknowns.iter().map(ToString::to_string).collect()
    }

    #[getter]
    fn rows(&self) -> Vec<String> {
        self.0.rows.iter().map(ToString::to_string).collect()
    }

    #[getter]
    fn conjecture_applicable(&self) -> bool {
        self.0.conjecture_applicable()
    }

    fn matrix(&self) -> Vec<Vec<i64>> {
        self.0.matrix().to_dense()
    }

    fn solve(&self) -> PyVerdict {
        PyVerdict(sys::solve_system(&self.0))
    }

    fn to_json(&self) -> PyResult<String> {
        let report = SystemReport::new(&self.0, &sys::solve_system(&self.0));
        serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }
}

/// Exact spectrum and determinant of the A matrix for one `k`.
#[pyclass(name = "SpectralReport", frozen)]
struct PySpectrum(spectral::SpectralReport);

#[pymethods]
impl PySpectrum {
    #[getter]
    fn k(&self) -> usize {
        self.0.k
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order
    }

    #[getter]
    fn full(&self) -> bool {
        self.0.full
    }

    /// Exact determinant as a Python int, when it was computed exactly.
    #[getter]
    fn det<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyAny>>> {
        match self.0.det.as_ref().and_then(|d| d.exact.as_ref()) {
            Some(x) => Ok(Some(py.import("builtins")?.getattr("int")?.call1((x.to_string(),))?)),
            None => Ok(None),
        }
    }

    #[getter]
    fn det_log10(&self) -> Option<f64> {
        self.0.det.as_ref().map(|d| d.log10_abs)
    }

    /// `[(value, multiplicity), ...]`
    #[getter]
    fn eigenvalues(&self) -> Vec<(i64, usize)> {
        self.0.eigenvalues.iter().map(|e| (e.value, e.multiplicity)).collect()
    }

    fn passed(&self) -> bool {
        self.0.passed()
    }

    fn __repr__(&self) -> String {
        format!("SpectralReport(k={}, {})", self.0.k, self.0.eigenvalue_string())
    }
}

#[pyfunction]
fn sub_multisets(word: &str, r: usize) -> PyResult<Vec<String>> {
    Ok(word::sub_multisets(&parse(word)?, r)
        .map_err(to_py)?
        .iter()
        .map(ToString::to_string)
        .collect())
}

#[pyfunction]
fn partitions(n: usize) -> Vec<Vec<u32>> {
    word::partitions(n).iter().map(|p| p.exponents().to_vec()).collect()
}

/// `(pattern, nullity)` for every exponent pattern of the given length.
#[pyfunction]
fn sweep(py: Python<'_>, length: usize, k: usize) -> PyResult<Vec<(String, usize)>> {
    let report = py.detach(|| sys::sweep_patterns(length, k)).map_err(to_py)?;
    Ok(report
        .entries
        .iter()
        .map(|e| (e.word.to_string(), e.verdict.nullity))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (k, full=None))]
fn spectrum(py: Python<'_>, k: usize, full: Option<bool>) -> PyResult<PySpectrum> {
    let opts = SpectrumOptions {
        full,
        ..SpectrumOptions::default()
    };
    py.detach(|| spectral::spectrum(k, opts, &Budget::default()))
        .map(PySpectrum)
        .map_err(to_py)
}

/// Rows of the spectral table as text: `(k, N, det, eigenvalues)`.
#[pyfunction]
#[pyo3(signature = (kmax=5, full=false))]
fn spectral_table(py: Python<'_>, kmax: usize, full: bool) -> PyResult<Vec<(usize, usize, String, String)>> {
    let table = py
        .detach(|| spectral::spectral_table(kmax, full, &Budget::default()))
        .map_err(to_py)?;
    Ok(table
        .rows
        .iter()
        .map(|r| (r.k, r.order, r.det_text(), r.eigenvalue_text()))
        .collect())
}

/// `(passed, largest relative vanishing moment)` for a radial profile.
#[pyfunction]
#[pyo3(signature = (profile="gaussian", width=1.0))]
fn oracle(py: Python<'_>, profile: &str, width: f64) -> PyResult<(bool, f64)> {
    let p = match profile {
        "gaussian" => ScalarProfile::gaussian(width),
        "bump" => ScalarProfile::compact_bump(width),
        other => return Err(PyValueError::new_err(format!("unknown profile {other:?}"))),
    }
    .map_err(to_py)?;
    let field = make_field(p).map_err(to_py)?;
    let grid = QuadratureGrid::default_for(&p);
    let report = py.detach(|| oracle_report(&field, &grid));
    Ok((report.passed(), report.max_vanishing()))
}

/// Full reproduction ledger: `(passed, text)`.
#[pyfunction]
#[pyo3(signature = (large_rows=true))]
fn reproduce(py: Python<'_>, large_rows: bool) -> PyResult<(bool, String)> {
    let opts = ReproduceOptions {
        large_rows,
        ..ReproduceOptions::default()
    };
    let ledger = py.detach(|| run_reproduce(&opts)).map_err(to_py)?;
    Ok((ledger.passed(), ledger.to_text()))
}

#[pymodule(name = "conserved_moments")]
fn conserved_moments_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWord>()?;
    m.add_class::<PyVerdict>()?;
    m.add_class::<PySystem>()?;
    m.add_class::<PySpectrum>()?;
    m.add_function(wrap_pyfunction!(sub_multisets, m)?)?;
    m.add_function(wrap_pyfunction!(partitions, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_table, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    Ok(())
}
