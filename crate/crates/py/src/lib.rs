use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ::petalknot as core;
use core::invariants;
use core::tablekit::KnotTable;

struct PyErrWrap(core::Error);

impl From<PyErrWrap> for PyErr {
    fn from(e: PyErrWrap) -> Self {
        match e.0 {
            core::Error::BudgetExceeded { .. } | core::Error::Verification(_) => PyRuntimeError::new_err(e.0.to_string()),
            other => PyValueError::new_err(other.to_string()),
        }
    }
}

fn wrap<T>(r: core::Result<T>) -> Result<T, PyErrWrap> {
    r.map_err(PyErrWrap)
}

type Terms = Vec<(i64, i64)>;

fn terms(p: &core::LaurentPolynomial) -> PyResult<Terms> {
    p.to_i64_terms().ok_or_else(|| PyValueError::new_err("coefficient does not fit in 64 bits"))
}

#[pyclass(name = "PetalPermutation", skip_from_py_object, frozen, eq, hash)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPetalPermutation(core::PetalPermutation);

#[pymethods]
impl PyPetalPermutation {
    #[new]
    fn new(heights: Vec<u32>) -> PyResult<Self> {
        Ok(Self(wrap(core::PetalPermutation::new(heights))?))
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self(wrap(core::PetalPermutation::parse(text))?))
    }

    #[staticmethod]
    fn torus(r: u32) -> PyResult<Self> {
        Ok(Self(wrap(core::torus_permutation(r))?))
    }

    #[getter]
    fn heights(&self) -> Vec<u32> {
        self.0.entries().to_vec()
    }

    #[getter]
    fn p(&self) -> usize {
        self.0.p()
    }

    fn is_extremal(&self) -> bool {
        self.0.is_extremal()
    }

    fn trivial_petals(&self) -> Vec<usize> {
        self.0.trivial_petals()
    }

    fn remove_trivial_petal(&self, position: usize) -> PyResult<Self> {
        Ok(Self(wrap(self.0.remove_trivial_petal(position))?))
    }

    fn equivalent(&self, other: &Self) -> bool {
        self.0.equivalent(&other.0)
    }

    fn mirror(&self) -> Self {
        Self(self.0.mirror())
    }

    fn diagram(&self) -> PyUbercrossingDiagram {
        PyUbercrossingDiagram(core::UbercrossingDiagram::from_petal(&self.0))
    }

    /// PD of the fully reduced petal diagram.
    fn reduced_diagram(&self) -> PyResult<PyPlanarDiagram> {
        Ok(PyPlanarDiagram(wrap(core::petal_reduced_diagram(&self.0))?))
    }

    /// Greedy unknotting certificate as a JSON string.
    fn unknotting_certificate(&self) -> String {
        core::unknotting_sequence(&self.0).to_json().to_string()
    }

    fn unknotting_cost(&self) -> u32 {
        core::unknotting_sequence(&self.0).total_cost
    }

    fn __repr__(&self) -> String {
        format!("PetalPermutation{}", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "UbercrossingDiagram", skip_from_py_object, frozen)]
#[derive(Clone)]
struct PyUbercrossingDiagram(core::UbercrossingDiagram);

#[pymethods]
impl PyUbercrossingDiagram {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self(wrap(core::UbercrossingDiagram::from_json(text))?))
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn heights(&self) -> Vec<u32> {
        self.0.heights().to_vec()
    }

    fn arcs(&self) -> Vec<(usize, usize)> {
        self.0.arcs()
    }

    fn unfold_top(&self) -> PyResult<Self> {
        Ok(Self(wrap(self.0.unfold_top())?))
    }

    fn mirror(&self) -> Self {
        Self(self.0.mirror())
    }

    /// Connected sum with the pre-petal diagram `other`.
    fn compose(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(wrap(self.0.compose_simple(&other.0))?))
    }

    /// Resolution into double crossings; `seed` picks a random schedule.
    #[pyo3(signature = (seed=None))]
    fn resolve(&self, seed: Option<u64>) -> PyResult<PyPlanarDiagram> {
        let pd = match seed {
            Some(s) => core::resolve(&self.0, &core::PerturbationSchedule::seeded(self.0.n(), s)),
            None => core::resolve_default(&self.0),
        };
        Ok(PyPlanarDiagram(wrap(pd)?))
    }

    fn fingerprint(&self) -> PyResult<PyFingerprint> {
        let pd = wrap(core::simplify::diagram_pd(&self.0))?;
        Ok(PyFingerprint(wrap(invariants::fingerprint(&pd))?))
    }
}

#[pyclass(name = "PlanarDiagram", skip_from_py_object, frozen)]
#[derive(Clone)]
struct PyPlanarDiagram(core::PlanarDiagram);

#[pymethods]
impl PyPlanarDiagram {
    #[new]
    #[pyo3(signature = (crossings, signs=None))]
    fn new(crossings: Vec<[u32; 4]>, signs: Option<Vec<i8>>) -> PyResult<Self> {
        Ok(Self(wrap(core::PlanarDiagram::new(crossings, signs.unwrap_or_default()))?))
    }

    #[getter]
    fn crossings(&self) -> Vec<[u32; 4]> {
        self.0.crossings.clone()
    }

    #[getter]
    fn signs(&self) -> Vec<i8> {
        self.0.signs.clone()
    }

    fn crossing_count(&self) -> usize {
        self.0.crossing_count()
    }

    fn writhe(&self) -> i64 {
        self.0.writhe()
    }

    fn gauss_code(&self) -> String {
        self.0.gauss_code().to_text()
    }

    fn fingerprint(&self) -> PyResult<PyFingerprint> {
        Ok(PyFingerprint(wrap(invariants::fingerprint(&self.0))?))
    }

    fn __len__(&self) -> usize {
        self.0.crossing_count()
    }
}

/// Determinant, Alexander polynomial in `t` and Jones polynomial in
/// `t^(1/2)`, as `(exponent, coefficient)` pairs.
#[pyclass(name = "Fingerprint", skip_from_py_object, frozen, eq)]
#[derive(Clone, PartialEq)]
struct PyFingerprint(invariants::Fingerprint);

#[pymethods]
impl PyFingerprint {
    #[getter]
    fn determinant(&self) -> u64 {
        self.0.determinant
    }

    #[getter]
    fn alexander(&self) -> PyResult<Terms> {
        terms(&self.0.alexander)
    }

    #[getter]
    fn jones(&self) -> PyResult<Terms> {
        terms(&self.0.jones)
    }

    fn mirror(&self) -> Self {
        Self(self.0.mirror())
    }

    /// Name in the knot table, `m`-prefixed for a mirror image.
    fn identify(&self) -> PyResult<Option<String>> {
        let table = wrap(KnotTable::load())?;
        Ok(table.identify(&self.0).map(|id| id.name()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Fingerprint(determinant={}, alexander={}, jones={})",
            self.0.determinant,
            self.0.alexander.display_with("t", 1),
            self.0.jones.display_with("t", 2)
        )
    }
}

#[pyfunction]
fn unknotting_bound(p: usize) -> PyResult<usize> {
    Ok(wrap(core::unknotting_bound(p))?)
}

#[pyfunction]
fn enumerate_classes(p: usize) -> PyResult<Vec<PyPetalPermutation>> {
    Ok(wrap(core::tablekit::enumerate_classes(p))?.into_iter().map(PyPetalPermutation).collect())
}

/// Classification table at petal number `p` as a JSON string.
#[pyfunction]
#[pyo3(signature = (p, budget=24))]
fn classify(py: Python<'_>, p: usize, budget: usize) -> PyResult<String> {
    let table = wrap(KnotTable::load())?;
    let c = py.detach(|| core::tablekit::classify(p, budget, &table));
    Ok(wrap(c)?.to_json().to_string())
}

#[pymodule]
fn petalknot(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPetalPermutation>()?;
    m.add_class::<PyUbercrossingDiagram>()?;
    m.add_class::<PyPlanarDiagram>()?;
    m.add_class::<PyFingerprint>()?;
    m.add_function(wrap_pyfunction!(unknotting_bound, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_classes, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    Ok(())
}
