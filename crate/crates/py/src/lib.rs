//! Python bindings. Exact values cross the boundary as `fractions.Fraction`.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use copylemma_core::catalog;
use copylemma_core::certificate::{parse_certificate, verify, TokenMap};
use copylemma_core::entropy::elemental_count;
use copylemma_core::guessing::{self, DEFAULT_GUARD};
use copylemma_core::lp::export_lp;
use copylemma_core::perm::{closure, Permutation};
use copylemma_core::problem_file::{parse_problem_file, Problem as CoreProblem, ProblemFile};
use copylemma_core::rational::format_fraction;
use copylemma_core::secret_sharing::{self, make_access_structure};
use copylemma_core::{Error, Rational};

create_exception!(pycopylemma, CopylemmaError, PyException);

fn err(e: Error) -> PyErr {
    CopylemmaError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, value: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_fraction(value),))
}

/// A sight graph on vertices `1..n`.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct SightGraph {
    inner: guessing::SightGraph,
}

#[pymethods]
impl SightGraph {
    #[new]
    #[pyo3(signature = (n, undirected, directed = Vec::new()))]
    fn new(n: usize, undirected: Vec<(usize, usize)>, directed: Vec<(usize, usize)>) -> PyResult<Self> {
        let inner = guessing::SightGraph::from_labels(n, &undirected, &directed).map_err(err)?;
        Ok(SightGraph { inner })
    }

    #[staticmethod]
    fn cycle(n: usize) -> PyResult<Self> {
        Ok(SightGraph { inner: guessing::SightGraph::cycle(n).map_err(err)? })
    }

    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    fn blow_up(&self, t: usize) -> PyResult<Self> {
        Ok(SightGraph { inner: self.inner.blow_up(t).map_err(err)? })
    }

    fn clique_cover_number(&self) -> PyResult<usize> {
        guessing::clique_cover_number(&self.inner).map_err(err)
    }

    fn fractional_clique_cover_number<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &guessing::fractional_clique_cover_number(&self.inner).map_err(err)?)
    }

    fn alpha(&self) -> PyResult<usize> {
        guessing::alpha(&self.inner).map_err(err)
    }

    /// Largest number of colourings won by one strategy with `colors` colours.
    #[pyo3(signature = (colors, guard = DEFAULT_GUARD))]
    fn brute_force(&self, colors: u64, guard: u64) -> PyResult<u64> {
        Ok(guessing::brute_force_guessing_number(&self.inner, colors, guard).map_err(err)?.max_winning)
    }

    /// Shannon-only guessing bound without symmetry.
    fn shannon_bound<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let p = guessing::GuessProblem::plain("graph", self.inner.clone()).map_err(err)?;
        fraction(py, &guessing::guessing_upper_bound(&p).map_err(err)?)
    }
}

/// A guessing or secret-sharing problem with its group and copy recipes.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Problem {
    inner: CoreProblem,
}

#[pymethods]
impl Problem {
    #[staticmethod]
    fn from_catalog(name: &str) -> PyResult<Self> {
        Ok(Problem { inner: catalog::catalog_problem(name).map_err(err)? })
    }

    /// Parses problem-file text.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Problem { inner: parse_problem_file(text).and_then(|pf| pf.build()).map_err(err)? })
    }

    /// Secret-sharing problem on participants `1..n`; cycles act on `0..n`.
    #[staticmethod]
    #[pyo3(signature = (n, minimal_sets, symmetry = Vec::new(), copies = Vec::new()))]
    fn access_structure(
        n: usize,
        minimal_sets: Vec<Vec<usize>>,
        symmetry: Vec<String>,
        copies: Vec<Vec<String>>,
    ) -> PyResult<Self> {
        let structure = make_access_structure(n, &minimal_sets).map_err(err)?;
        let gens = symmetry
            .iter()
            .map(|c| Permutation::parse_cycles(c, n + 1, 0))
            .collect::<copylemma_core::Result<Vec<_>>>()
            .map_err(err)?;
        let group = closure(n + 1, &gens).map_err(err)?;
        let p = secret_sharing::RatioProblem::new("structure", structure, group, &copies).map_err(err)?;
        Ok(Problem { inner: CoreProblem::Ratio(p) })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner {
            CoreProblem::Ratio(_) => "secret-sharing",
            CoreProblem::Guess(_) => "guessing",
        }
    }

    fn without_symmetry(&self) -> Self {
        Problem { inner: self.inner.without_symmetry() }
    }

    fn without_copies(&self) -> Self {
        Problem { inner: self.inner.without_copies() }
    }

    /// `(columns, rows)` of the assembled LP.
    fn size(&self) -> PyResult<(usize, usize)> {
        let m = self.inner.model().map_err(err)?;
        Ok((m.columns().len(), m.rows().len()))
    }

    /// Exact LP optimum: a ratio lower bound or a guessing upper bound.
    fn solve<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let value = match &self.inner {
            CoreProblem::Ratio(p) => secret_sharing::ratio_lower_bound(p),
            CoreProblem::Guess(p) => guessing::guessing_upper_bound(p),
        }
        .map_err(err)?;
        fraction(py, &value)
    }

    fn export_lp(&self) -> PyResult<String> {
        Ok(export_lp(&self.inner.model().map_err(err)?))
    }

    fn to_text(&self) -> String {
        ProblemFile::from_problem(&self.inner).to_text()
    }

    /// Checks a dual certificate for a guessing problem; returns its bound.
    fn verify_certificate<'py>(&self, py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
        let CoreProblem::Guess(p) = &self.inner else {
            return Err(CopylemmaError::new_err("certificates apply to guessing problems"));
        };
        let tokens = TokenMap::for_universe(p.universe()).map_err(err)?;
        let rows = parse_certificate(text, &tokens).map_err(err)?;
        fraction(py, &verify(&rows, p).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("Problem({:?}, {})", self.inner.name(), self.kind())
    }
}

#[pyfunction]
fn catalog_names() -> Vec<&'static str> {
    catalog::names().collect()
}

#[pyfunction(name = "elemental_count")]
fn py_elemental_count(m: usize) -> usize {
    elemental_count(m)
}

#[pymodule]
fn pycopylemma(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CopylemmaError", m.py().get_type::<CopylemmaError>())?;
    m.add_class::<SightGraph>()?;
    m.add_class::<Problem>()?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(py_elemental_count, m)?)?;
    Ok(())
}
