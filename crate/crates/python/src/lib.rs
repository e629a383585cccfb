//! Python module `burnt_pancake`.
//!
//! Structured results cross the boundary as JSON strings; the helpers that
//! produce them are plain Rust so they can be tested without an interpreter.

use burnt_pancake::covering::{btilde_spectrum_check, check_covering, fiber_map};
use burnt_pancake::error::Error;
use burnt_pancake::quotient;
use burnt_pancake::spectra::{self, theorem::vector_as_i64};
use burnt_pancake::{CayleyGraph, Family, ReversalIndex, SignedPermutation};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

pub fn quotient_rows(n: usize) -> Result<Vec<Vec<i64>>, Error> {
    let m = quotient::quotient_block(n)?;
    Ok(m.to_integer_rows().expect("integer matrix"))
}

pub fn eigenpairs(n: usize) -> Result<Vec<(i64, Vec<i64>)>, Error> {
    Ok(spectra::theorem_eigenpairs(n)?
        .iter()
        .map(|c| (c.lambda, vector_as_i64(&c.vector)))
        .collect())
}

pub fn theorem_json(n: usize, lift: bool) -> Result<String, Error> {
    let r = spectra::verify_theorem(n, lift)?;
    let mut v = serde_json::to_value(&r).expect("serializable");
    v["passed"] = r.passed().into();
    Ok(v.to_string())
}

pub fn gap(n: usize) -> Result<(f64, f64, String, f64), Error> {
    let g = spectra::spectral_gap(n)?;
    Ok((g.lambda2, g.gap, g.method.to_string(), g.residual))
}

pub fn covering_json(n: usize) -> Result<String, Error> {
    let r = check_covering(&fiber_map(n)?)?;
    Ok(serde_json::to_string(&r).expect("serializable"))
}

#[pyclass(
    name = "SignedPermutation",
    module = "burnt_pancake",
    eq,
    frozen,
    from_py_object
)]
#[derive(Clone, PartialEq, Eq)]
pub struct PySignedPermutation(SignedPermutation);

#[pymethods]
impl PySignedPermutation {
    #[new]
    fn new(entries: Vec<i32>) -> PyResult<Self> {
        SignedPermutation::new(entries).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        Self(SignedPermutation::identity(n))
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        SignedPermutation::parse(text).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn unrank(n: usize, rank: u64) -> PyResult<Self> {
        SignedPermutation::unrank(n, rank).map(Self).map_err(py_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn entries(&self) -> Vec<i32> {
        self.0.entries().to_vec()
    }

    fn rank(&self) -> PyResult<u64> {
        self.0.rank().map_err(py_err)
    }

    /// Applies the signed prefix reversal `r_i`.
    fn reverse(&self, i: usize) -> PyResult<Self> {
        let r = ReversalIndex::signed(i, self.0.n()).map_err(py_err)?;
        self.0.apply_reversal(r).map(Self).map_err(py_err)
    }

    fn compose(&self, other: &Self) -> PyResult<Self> {
        if self.0.n() != other.0.n() {
            return Err(py_err(Error::DimensionMismatch {
                expected: self.0.n(),
                got: other.0.n(),
            }));
        }
        Ok(Self(self.0.compose(&other.0)))
    }

    fn inverse(&self) -> Self {
        Self(self.0.inverse())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("SignedPermutation({:?})", self.0.entries())
    }
}

/// Implicit Cayley graph `BP_n` or `P_n`.
#[pyclass(name = "CayleyGraph", module = "burnt_pancake", frozen)]
pub struct PyCayleyGraph(CayleyGraph);

#[pymethods]
impl PyCayleyGraph {
    #[new]
    #[pyo3(signature = (n, family = "burnt"))]
    fn new(n: usize, family: &str) -> PyResult<Self> {
        let family: Family = family.parse().map_err(PyValueError::new_err)?;
        CayleyGraph::new(family, n).map(Self).map_err(py_err)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.0.vertex_count()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn vertex(&self, k: usize) -> PyResult<PySignedPermutation> {
        self.0.vertex(k).map(PySignedPermutation).map_err(py_err)
    }

    fn rank_of(&self, s: &PySignedPermutation) -> PyResult<usize> {
        self.0.rank_of(&s.0).map_err(py_err)
    }

    fn neighbors(&self, k: usize) -> PyResult<Vec<usize>> {
        self.0.neighbors(k).map_err(py_err)
    }

    /// Adjacency in Matrix Market coordinate format.
    fn matrix_market(&self) -> PyResult<String> {
        let a = self.0.build_sparse_adjacency().map_err(py_err)?;
        let mut buf = Vec::new();
        a.export_matrix_market(&mut buf).map_err(py_err)?;
        Ok(String::from_utf8(buf).expect("ascii output"))
    }
}

#[pyfunction(name = "quotient_block")]
fn py_quotient_block(n: usize) -> PyResult<Vec<Vec<i64>>> {
    quotient_rows(n).map_err(py_err)
}

/// `[(lambda, vector), ...]` with exactly verified integer vectors.
#[pyfunction(name = "theorem_eigenpairs")]
fn py_theorem_eigenpairs(n: usize) -> PyResult<Vec<(i64, Vec<i64>)>> {
    eigenpairs(n).map_err(py_err)
}

/// Full verification report as JSON.
#[pyfunction(name = "verify_theorem")]
#[pyo3(signature = (n, lift = false))]
fn py_verify_theorem(n: usize, lift: bool) -> PyResult<String> {
    theorem_json(n, lift).map_err(py_err)
}

/// `(lambda2, gap, method, residual)`.
#[pyfunction(name = "spectral_gap")]
fn py_spectral_gap(py: Python<'_>, n: usize) -> PyResult<(f64, f64, String, f64)> {
    py.detach(|| gap(n)).map_err(py_err)
}

/// Descending adjacency eigenvalues of `BP_n`, `n ≤ 5`.
#[pyfunction(name = "burnt_spectrum")]
fn py_burnt_spectrum(py: Python<'_>, n: usize) -> PyResult<Vec<f64>> {
    py.detach(|| spectra::burnt_dense_spectrum(n))
        .map(|s| s.eigenvalues)
        .map_err(py_err)
}

/// Ascending eigenvalues of the normalized Laplacian of the projection.
#[pyfunction(name = "btilde_spectrum")]
fn py_btilde_spectrum(n: usize) -> PyResult<Vec<f64>> {
    btilde_spectrum_check(n).map(|r| r.numeric).map_err(py_err)
}

/// Covering-condition report as JSON.
#[pyfunction(name = "check_covering")]
fn py_check_covering(n: usize) -> PyResult<String> {
    covering_json(n).map_err(py_err)
}

#[pymodule]
#[pyo3(name = "burnt_pancake")]
fn burnt_pancake_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySignedPermutation>()?;
    m.add_class::<PyCayleyGraph>()?;
    m.add_function(wrap_pyfunction!(py_quotient_block, m)?)?;
    m.add_function(wrap_pyfunction!(py_theorem_eigenpairs, m)?)?;
    m.add_function(wrap_pyfunction!(py_verify_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(py_spectral_gap, m)?)?;
    m.add_function(wrap_pyfunction!(py_burnt_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(py_btilde_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(py_check_covering, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
