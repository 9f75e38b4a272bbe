//! Python bindings.

use std::collections::HashMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use thetacert::kernels::{self, KernelKind};
use thetacert::operators::{eval_cell, OpConfig, Quantity};
use thetacert::spectral::{gershgorin_min, ProjectionMatrix, BSJ_INDEX, DIM};
use thetacert::verifier::{self, Inputs};
use thetacert::{Error, Interval, Params};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Closed interval with outward rounding.
#[pyclass(name = "Interval", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyInterval(Interval);

#[pymethods]
impl PyInterval {
    #[new]
    #[pyo3(signature = (lo, hi=None))]
    fn new(lo: f64, hi: Option<f64>) -> PyResult<Self> {
        Interval::new(lo, hi.unwrap_or(lo)).map(PyInterval).map_err(py_err)
    }

    /// Enclosure of a decimal literal.
    #[staticmethod]
    fn from_decimal(s: &str) -> PyResult<Self> {
        Interval::from_decimal(s).map(PyInterval).map_err(py_err)
    }

    #[getter]
    fn lo(&self) -> f64 {
        self.0.lo()
    }

    #[getter]
    fn hi(&self) -> f64 {
        self.0.hi()
    }

    fn width(&self) -> f64 {
        self.0.width()
    }

    fn mid(&self) -> f64 {
        self.0.mid()
    }

    fn contains(&self, x: f64) -> bool {
        self.0.contains(x)
    }

    fn sqrt(&self) -> PyResult<Self> {
        self.0.try_sqrt().map(PyInterval).map_err(py_err)
    }

    fn ln(&self) -> PyResult<Self> {
        self.0.try_ln().map(PyInterval).map_err(py_err)
    }

    fn asinh(&self) -> Self {
        PyInterval(self.0.asinh())
    }

    fn __add__(&self, o: &Self) -> Self {
        PyInterval(self.0 + o.0)
    }

    fn __sub__(&self, o: &Self) -> Self {
        PyInterval(self.0 - o.0)
    }

    fn __mul__(&self, o: &Self) -> Self {
        PyInterval(self.0 * o.0)
    }

    fn __truediv__(&self, o: &Self) -> PyResult<Self> {
        self.0.try_div(&o.0).map(PyInterval).map_err(py_err)
    }

    fn __neg__(&self) -> Self {
        PyInterval(-self.0)
    }

    fn __repr__(&self) -> String {
        format!("Interval({:?}, {:?})", self.0.lo(), self.0.hi())
    }
}

fn kind(m: u32) -> PyResult<KernelKind> {
    KernelKind::from_m(m).map_err(py_err)
}

/// Enclosure of the order-`m` kernel `X_m(r)` for `m` in {1, 3, 6}.
#[pyfunction]
fn kernel_value(m: u32, r: PyInterval) -> PyResult<PyInterval> {
    kernels::kernel_value(kind(m)?, r.0)
        .map(PyInterval)
        .map_err(py_err)
}

/// Exact enclosure of the arcsinh integral over `[c, d]`.
#[pyfunction]
fn arcsinh_exact_integral(c: f64, d: f64, rho_t: PyInterval) -> PyResult<PyInterval> {
    kernels::arcsinh_exact_integral(
        Interval::point(c),
        Interval::point(d),
        rho_t.0,
        Params::default().a,
    )
    .map(PyInterval)
    .map_err(py_err)
}

fn cell(q: Quantity, j: usize, n: usize, budget: usize) -> PyResult<(PyInterval, bool)> {
    let cfg = OpConfig {
        budget,
        ..OpConfig::default()
    };
    let c = eval_cell(q, j, n, &cfg).map_err(py_err)?;
    Ok((PyInterval(c.value), c.flag == thetacert::quadrature::Flag::Ok))
}

/// `Ĩ` over grid cell `j` of `n`; returns `(enclosure, ok)`.
#[pyfunction]
#[pyo3(signature = (j, n, budget=200))]
fn itilde_cell(j: usize, n: usize, budget: usize) -> PyResult<(PyInterval, bool)> {
    cell(Quantity::Itilde, j, n, budget)
}

/// `T_S B` (or `T_A B` when `anti`) of order `m` over grid cell `j` of `n`.
#[pyfunction]
#[pyo3(signature = (m, j, n, anti=false, budget=200))]
fn t_bsj_cell(m: u32, j: usize, n: usize, anti: bool, budget: usize) -> PyResult<(PyInterval, bool)> {
    let k = kind(m)?;
    let q = if anti { Quantity::Anti(k) } else { Quantity::Sym(k) };
    cell(q, j, n, budget)
}

/// Shipped projection matrix of order `m` as nested lists of midpoints.
#[pyfunction]
fn projection_matrix(m: u32) -> PyResult<Vec<Vec<f64>>> {
    let t = ProjectionMatrix::shipped(m).map_err(py_err)?;
    Ok((0..DIM)
        .map(|i| (0..DIM).map(|j| t.get(i, j).mid()).collect())
        .collect())
}

/// Gershgorin lower bound of the shipped matrix with the `B_sj` row removed.
#[pyfunction]
fn gershgorin(m: u32) -> PyResult<(PyInterval, usize)> {
    let t = ProjectionMatrix::shipped(m).map_err(py_err)?;
    let g = gershgorin_min(&t, BSJ_INDEX);
    Ok((PyInterval(g.bound), g.disk))
}

/// Upper bound for the smallest root of `A - x + B/(C - x)`, or None.
#[pyfunction]
fn vertex_lemma(a: PyInterval, b: PyInterval, c: PyInterval) -> Option<PyInterval> {
    verifier::vertex_lemma(a.0, b.0, c.0).map(PyInterval)
}

/// Composes the certificate from `{name: (lo, hi)}`. Missing names use the
/// published constants. Returns `(global_pass, report_text)`.
#[pyfunction]
#[pyo3(signature = (values=None, min_in_last_region=true))]
fn certify(
    values: Option<HashMap<String, (f64, f64)>>,
    min_in_last_region: bool,
) -> PyResult<(bool, String)> {
    let mut inp = Inputs::published();
    inp.min_in_last_region = Some(min_in_last_region);
    for (k, (lo, hi)) in values.unwrap_or_default() {
        let v = Some(Interval::new(lo, hi).map_err(py_err)?);
        match k.as_str() {
            "e_norm" => inp.e_norm = v,
            "e_inner" => inp.e_inner = v,
            "theta_a_norm" => inp.theta_a_norm = v,
            "e6_norm" => inp.e6_norm = v,
            "min_itilde" => inp.min_itilde = v,
            "gersh3" => inp.gersh3 = v,
            "gersh6" => inp.gersh6 = v,
            "defect3" => inp.defect3 = v,
            "defect6" => inp.defect6 = v,
            "bsj_norm_sq" => inp.bsj_norm_sq = v,
            other => {
                return Err(PyValueError::new_err(format!("unknown input `{other}`")));
            }
        }
    }
    let rep = verifier::full_certificate(&inp, vec![]);
    Ok((rep.global_pass(), rep.to_text()))
}

#[pymodule]
fn thetacert_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInterval>()?;
    m.add_function(wrap_pyfunction!(kernel_value, m)?)?;
    m.add_function(wrap_pyfunction!(arcsinh_exact_integral, m)?)?;
    m.add_function(wrap_pyfunction!(itilde_cell, m)?)?;
    m.add_function(wrap_pyfunction!(t_bsj_cell, m)?)?;
    m.add_function(wrap_pyfunction!(projection_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(gershgorin, m)?)?;
    m.add_function(wrap_pyfunction!(vertex_lemma, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    Ok(())
}
