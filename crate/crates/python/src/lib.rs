//! Python bindings: permutations, annular enumeration, cumulant models and
//! the even / R-diagonal machinery.
//!
//! Rationals cross the boundary as `fractions.Fraction`. Words are letter
//! names joined by `.`, as in model files.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use sofree::annular::{self, is_annular_nc, kreweras_annulus};
use sofree::cumulants::{word_phi, word_phi2, CumulantModel, CumulantSource, Word};
use sofree::dist::{emit_model, load_model_str, resolve_model};
use sofree::perm::AnnulusShape;
use sofree::special::{self, SequenceTable};
use sofree::Rational;

create_exception!(pysofree, SofreeError, PyValueError);
create_exception!(pysofree, CapExceededError, SofreeError);

fn err(e: sofree::Error) -> PyErr {
    match e {
        sofree::Error::CapExceeded { .. } => CapExceededError::new_err(e.to_string()),
        _ => SofreeError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.to_string(),))
}

#[pyclass(name = "Permutation", module = "pysofree", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPermutation(sofree::perm::Permutation);

#[pymethods]
impl PyPermutation {
    /// Parses cycle notation on `1..=size`; without `size` the largest point sets it.
    #[new]
    #[pyo3(signature = (cycles, size=None))]
    fn new(cycles: &str, size: Option<usize>) -> PyResult<Self> {
        let p = match size {
            Some(n) => sofree::perm::Permutation::parse_sized(cycles, n),
            None => cycles.parse(),
        };
        p.map(PyPermutation).map_err(err)
    }

    /// From 0-based images: `images[i]` is where `i` goes.
    #[staticmethod]
    fn from_images(images: Vec<usize>) -> PyResult<Self> {
        sofree::perm::Permutation::from_images(&images).map(PyPermutation).map_err(err)
    }

    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    fn images(&self) -> Vec<usize> {
        self.0.images()
    }

    /// Cycles with 0-based points, each starting at its least point.
    fn cycles(&self) -> Vec<Vec<usize>> {
        self.0.cycles()
    }

    fn cycle_count(&self) -> usize {
        self.0.cycle_count()
    }

    /// `size - cycle_count`.
    fn length(&self) -> usize {
        self.0.length()
    }

    fn inverse(&self) -> Self {
        PyPermutation(self.0.inverse())
    }

    /// `(self * other)(i) = self(other(i))`.
    fn compose(&self, other: &Self) -> PyResult<Self> {
        self.0.compose(&other.0).map(PyPermutation).map_err(err)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.compose(other)
    }

    fn is_annular_nc(&self, outer: usize, inner: usize) -> bool {
        is_annular_nc(&self.0, AnnulusShape::new(outer, inner))
    }

    /// `self^{-1} gamma` on the `(outer, inner)` annulus.
    fn kreweras(&self, outer: usize, inner: usize) -> PyResult<Self> {
        kreweras_annulus(&self.0, AnnulusShape::new(outer, inner)).map(PyPermutation).map_err(err)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.0.images().hash(&mut h);
        h.finish()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Permutation('{}', size={})", self.0, self.0.size())
    }
}

fn wrap(ps: &[sofree::perm::Permutation]) -> Vec<PyPermutation> {
    ps.iter().cloned().map(PyPermutation).collect()
}

/// Non-crossing permutations of `n` points in canonical order.
#[pyfunction]
fn enumerate_nc(n: usize) -> PyResult<Vec<PyPermutation>> {
    Ok(wrap(&annular::enumerate_nc(n).map_err(err)?))
}

/// Annular non-crossing permutations on `(outer, inner)` in canonical order.
#[pyfunction]
fn enumerate_snc(outer: usize, inner: usize) -> PyResult<Vec<PyPermutation>> {
    Ok(wrap(&annular::enumerate_snc(AnnulusShape::new(outer, inner)).map_err(err)?))
}

/// Annular non-crossing partitioned permutations, as `[{blocks} ; cycles]` strings.
#[pyfunction]
fn enumerate_ps_nc(outer: usize, inner: usize) -> PyResult<Vec<String>> {
    let xs = annular::enumerate_ps_nc(AnnulusShape::new(outer, inner)).map_err(err)?;
    Ok(xs.iter().map(|x| x.to_string()).collect())
}

#[pyclass(name = "Model", module = "pysofree", frozen)]
pub struct PyModel(CumulantModel);

impl PyModel {
    fn word(&self, s: &str) -> PyResult<Word> {
        self.0.alphabet().parse_word(s).map_err(err)
    }
}

#[pymethods]
impl PyModel {
    /// A builtin name (`semicircular`, `circular`, `haar_unitary`,
    /// `free_poisson[:rate]`) or a path to a JSON model.
    #[new]
    fn new(reference: &str) -> PyResult<Self> {
        resolve_model(reference).map(PyModel).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        load_model_str(text).map(PyModel).map_err(err)
    }

    fn to_json(&self) -> String {
        emit_model(&self.0).to_string()
    }

    fn letters(&self) -> Vec<String> {
        let a = self.0.alphabet();
        a.ids().map(|l| a.name(l).to_string()).collect()
    }

    fn kappa<'py>(&self, py: Python<'py>, word: &str) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.0.kappa(&self.word(word)?).map_err(err)?)
    }

    fn kappa2<'py>(&self, py: Python<'py>, left: &str, right: &str) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.0.kappa2(&self.word(left)?, &self.word(right)?).map_err(err)?)
    }

    fn phi<'py>(&self, py: Python<'py>, word: &str) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &word_phi(&self.0, &self.word(word)?).map_err(err)?)
    }

    fn phi2<'py>(&self, py: Python<'py>, left: &str, right: &str) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &word_phi2(&self.0, &self.word(left)?, &self.word(right)?).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("Model(letters={:?})", self.letters())
    }
}

/// `{"first": {n: v}, "second": {(p, q): v}}`.
fn sequence<'py>(py: Python<'py>, t: &SequenceTable) -> PyResult<Bound<'py, PyDict>> {
    let first = PyDict::new(py);
    for (n, v) in &t.first {
        first.set_item(n, fraction(py, v)?)?;
    }
    let second = PyDict::new(py);
    for ((p, q), v) in &t.second {
        second.set_item((p, q), fraction(py, v)?)?;
    }
    let out = PyDict::new(py);
    out.set_item("first", first)?;
    out.set_item("second", second)?;
    Ok(out)
}

fn determining(model: &PyModel, element: &str, order: usize) -> PyResult<SequenceTable> {
    let a = model.word(element)?;
    let m = &model.0;
    let r = if m.alphabet().adjoint(&a) == a {
        special::determining_of_even(m, &a, order)
    } else {
        special::determining_of_r_diagonal(m, &a, order)
    };
    r.map_err(err)
}

/// Determining sequence of an even (self-adjoint) or R-diagonal element.
#[pyfunction]
fn determining_sequence<'py>(py: Python<'py>, model: &PyModel, element: &str, order: usize) -> PyResult<Bound<'py, PyDict>> {
    sequence(py, &determining(model, element, order)?)
}

/// Cumulants of `a a*` (or `x^2`) computed from the determining sequence.
#[pyfunction]
fn square_cumulants<'py>(py: Python<'py>, model: &PyModel, element: &str, order: usize) -> PyResult<Bound<'py, PyDict>> {
    let beta = determining(model, element, order)?;
    sequence(py, &special::square_cumulants(&beta, order).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (model, element, order=6))]
fn is_r_diagonal(model: &PyModel, element: &str, order: usize) -> PyResult<bool> {
    Ok(special::verify_r_diagonal(&model.0, &model.word(element)?, order).map_err(err)?.holds)
}

#[pyfunction]
#[pyo3(signature = (model, element, order=6))]
fn is_even(model: &PyModel, element: &str, order: usize) -> PyResult<bool> {
    Ok(special::verify_even(&model.0, &model.word(element)?, order).map_err(err)?.holds)
}

/// Whether `r b` passes the R-diagonal product check up to `order`.
#[pyfunction]
#[pyo3(signature = (model, r, b, order=6))]
fn check_mt1(model: &PyModel, r: &str, b: &str, order: usize) -> PyResult<bool> {
    let rep = special::check_mt1(&model.0, &model.word(r)?, &model.word(b)?, order, order).map_err(err)?;
    Ok(rep.passed())
}

/// Worked values as dicts with `group`, `name`, `expected`, `actual`, `passed`.
#[pyfunction]
#[pyo3(signature = (order=6))]
fn run_examples<'py>(py: Python<'py>, order: usize) -> PyResult<Bound<'py, PyList>> {
    let checks = sofree::examples::run_examples(order).map_err(err)?;
    let out = PyList::empty(py);
    for c in checks {
        let d = PyDict::new(py);
        d.set_item("group", c.group)?;
        d.set_item("name", c.name)?;
        d.set_item("expected", c.expected)?;
        d.set_item("actual", c.actual)?;
        d.set_item("passed", c.passed)?;
        out.append(d)?;
    }
    Ok(out)
}

#[pymodule]
pub fn pysofree(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("SofreeError", m.py().get_type::<SofreeError>())?;
    m.add("CapExceededError", m.py().get_type::<CapExceededError>())?;
    m.add_class::<PyPermutation>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(enumerate_nc, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_snc, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_ps_nc, m)?)?;
    m.add_function(wrap_pyfunction!(determining_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(square_cumulants, m)?)?;
    m.add_function(wrap_pyfunction!(is_r_diagonal, m)?)?;
    m.add_function(wrap_pyfunction!(is_even, m)?)?;
    m.add_function(wrap_pyfunction!(check_mt1, m)?)?;
    m.add_function(wrap_pyfunction!(run_examples, m)?)?;
    Ok(())
}
