//! Python bindings. Rationals cross the boundary as `"p/q"` strings and
//! structured reports as JSON text, so nothing is ever rounded.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use tprop_core::aleph::{self, AlephElement};
use tprop_core::bialgebra::Bialgebra as CoreBialgebra;
use tprop_core::endv;
use tprop_core::free;
use tprop_core::strata::{ChainComplex, SignRule};
use tprop_core::{scalar, Error, TensorMap};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("reports serialize")
}

/// A multilinear map `V^{⊗m} → V^{⊗n}` with exact rational coefficients.
#[pyclass(name = "Tensor", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTensor(TensorMap);

#[pymethods]
impl PyTensor {
    /// Coefficients in row-major order: output multi-index first, leg 1 most significant.
    #[new]
    fn new(inputs: usize, outputs: usize, dim: usize, coeffs: Vec<String>) -> PyResult<Self> {
        let c = coeffs.iter().map(|s| scalar::parse(s)).collect::<Result<Vec<_>, _>>().map_err(err)?;
        TensorMap::new(inputs, outputs, dim, c).map(PyTensor).map_err(err)
    }

    #[staticmethod]
    fn identity(k: usize, dim: usize) -> Self {
        PyTensor(TensorMap::identity(k, dim))
    }

    #[getter]
    fn inputs(&self) -> usize {
        self.0.inputs()
    }

    #[getter]
    fn outputs(&self) -> usize {
        self.0.outputs()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn coeffs(&self) -> Vec<String> {
        self.0.coeffs().iter().map(scalar::format).collect()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `self ∘ other`: apply `other` first.
    fn compose(&self, other: &PyTensor) -> PyResult<Self> {
        tprop_core::tensor::compose(&self.0, &other.0).map(PyTensor).map_err(err)
    }

    /// Insert `other` (one input) at output `i` of `self`.
    fn circ(&self, other: &PyTensor, i: usize) -> PyResult<Self> {
        endv::circ_i(&self.0, &other.0, i).map(PyTensor).map_err(err)
    }

    /// Insert `self` (one output) at input `j` of `other`.
    fn jcirc(&self, other: &PyTensor, j: usize) -> PyResult<Self> {
        endv::jcirc(&self.0, &other.0, j).map(PyTensor).map_err(err)
    }

    fn to_json(&self) -> String {
        json(&self.0)
    }

    fn __eq__(&self, other: &PyTensor) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Tensor{}", self.0.signature())
    }
}

/// A product/coproduct pair read from the JSON structure-constant format.
#[pyclass(name = "Bialgebra", frozen)]
struct PyBialgebra(CoreBialgebra);

#[pymethods]
impl PyBialgebra {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        CoreBialgebra::from_json(text).map(PyBialgebra).map_err(err)
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PyValueError::new_err(format!("{path}: {e}")))?;
        Self::from_json(&text)
    }

    #[getter]
    fn product(&self) -> PyTensor {
        PyTensor(self.0.star.clone())
    }

    #[getter]
    fn coproduct(&self) -> PyTensor {
        PyTensor(self.0.delta.clone())
    }

    fn is_bialgebra(&self) -> PyResult<bool> {
        Ok(self.0.report().map_err(err)?.holds())
    }

    /// Associator, coassociator and compatibility defect as JSON.
    fn defects(&self) -> PyResult<String> {
        Ok(json(&self.0.report().map_err(err)?))
    }

    fn mc_defect(&self) -> PyResult<String> {
        Ok(json(&aleph::mc_defect(&self.0.star, &self.0.delta).map_err(err)?))
    }

    /// Bracket of two of `"psi"`, `"theta"`, `"beta"` as JSON.
    fn bracket(&self, left: &str, right: &str) -> PyResult<String> {
        let x = aleph::bracket(&self.element(left)?, &self.element(right)?).map_err(err)?;
        Ok(json(&x))
    }

    /// Evaluate a free word with generators sent to iterated (co)products.
    fn evaluate(&self, word: &str) -> PyResult<String> {
        let w = free::parse_word(word).map_err(err)?;
        let assign = free::bialgebra_assignment(&self.0.star, &self.0.delta);
        Ok(json(&free::evaluate(&w, &assign).map_err(err)?))
    }

    fn to_json(&self) -> String {
        json(&self.0.to_file())
    }
}

impl PyBialgebra {
    fn element(&self, name: &str) -> PyResult<AlephElement> {
        let psi = || AlephElement::psi_bar(self.0.star.clone()).map_err(err);
        let theta = || AlephElement::theta_bar(self.0.delta.clone()).map_err(err);
        match name {
            "psi" => psi(),
            "theta" => theta(),
            "beta" => psi()?.add(&theta()?).map_err(err),
            _ => Err(PyValueError::new_err(format!("unknown element {name:?}"))),
        }
    }
}

/// `(f_vector, homology_ranks)` of the strata complex for `(m, n)`.
#[pyfunction]
fn homology(m: usize, n: usize) -> PyResult<(Vec<usize>, Vec<usize>)> {
    let c = ChainComplex::assemble(m, n, SignRule::Induced).map_err(err)?;
    Ok((c.f_vector(), c.homology_ranks()))
}

#[pyfunction]
fn normal_form(word: &str) -> PyResult<String> {
    Ok(free::parse_word(word).map_err(err)?.normal_form().to_string())
}

/// Axiom report as JSON.
#[pyfunction]
#[pyo3(signature = (dim, bound=6, trials=100, seed=0))]
fn check_axioms(dim: usize, bound: usize, trials: usize, seed: u64) -> String {
    json(&endv::check_axioms(dim, bound, trials, seed))
}

#[pymodule]
fn tprop(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTensor>()?;
    m.add_class::<PyBialgebra>()?;
    m.add_function(wrap_pyfunction!(homology, m)?)?;
    m.add_function(wrap_pyfunction!(normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(check_axioms, m)?)?;
    Ok(())
}
