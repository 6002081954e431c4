//! Python bindings for `octo_cfs`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use octo_cfs::cfs::{self, OperatorPoint, SystemConfig};
use octo_cfs::experiment::{self, ExperimentConfig};
use octo_cfs::mult_algebra::{imaginary_generators, span_dimension, Field, Side};
use octo_cfs::octonion::Octonion as Oct;
use octo_cfs::witt::{charges, ideal_basis, Ideal};

fn err(e: octo_cfs::Error) -> PyErr {
    match experiment::Status::from_error(&e) {
        experiment::Status::ValidationError => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Real octonion with coefficients on `1, e1, ..., e7`.
#[pyclass(frozen, name = "Octonion")]
#[derive(Clone)]
struct PyOctonion(Oct);

#[pymethods]
impl PyOctonion {
    #[new]
    fn new(coeffs: [f64; 8]) -> PyResult<Self> {
        Oct::try_new(coeffs).map(PyOctonion).map_err(err)
    }

    #[staticmethod]
    fn basis(index: usize) -> PyResult<Self> {
        if index > 7 {
            return Err(PyValueError::new_err("basis index must be in 0..=7"));
        }
        Ok(PyOctonion(Oct::basis(index)))
    }

    #[getter]
    fn coeffs(&self) -> [f64; 8] {
        self.0.coeffs
    }

    fn conj(&self) -> Self {
        PyOctonion(self.0.conj())
    }

    fn norm(&self) -> f64 {
        self.0.norm()
    }

    fn inv(&self) -> PyResult<Self> {
        self.0.inv().map(PyOctonion).map_err(err)
    }

    fn __mul__(&self, rhs: &Self) -> Self {
        PyOctonion(self.0.product(&rhs.0))
    }

    #[staticmethod]
    fn associator(a: &Self, b: &Self, c: &Self) -> Self {
        PyOctonion(Oct::associator(&a.0, &b.0, &c.0))
    }

    fn __repr__(&self) -> String {
        format!("Octonion({:?})", self.0.coeffs)
    }
}

/// Real and complex dimension of the algebra generated by left multiplication.
#[pyfunction]
fn clifford_dim() -> PyResult<(usize, usize)> {
    let g = imaginary_generators(Side::Left);
    let real = span_dimension(&g, Field::Real).map_err(err)?;
    let complex = span_dimension(&g, Field::Complex).map_err(err)?;
    Ok((real.dimension, complex.dimension))
}

/// `(label, grade, charge)` for the states of ideal `"u"` or `"d"`.
#[pyfunction]
fn ideal_charges(ideal: &str) -> PyResult<Vec<(String, usize, f64)>> {
    let which = match ideal {
        "u" => Ideal::U,
        "d" => Ideal::D,
        _ => return Err(PyValueError::new_err("ideal must be \"u\" or \"d\"")),
    };
    let cs = charges(&ideal_basis(which)).map_err(err)?;
    Ok(cs
        .into_iter()
        .map(|c| (c.label.to_string(), c.grade, c.value))
        .collect())
}

type Rows = Vec<Vec<Complex64>>;

fn point(rows: Rows, cfg: &SystemConfig) -> PyResult<OperatorPoint> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("operator must be a square matrix"));
    }
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    cfs::validate_point(m, cfg).map_err(err)
}

/// Causal class and Lagrangian of a pair of operators given as nested lists
/// of complex numbers.
#[pyfunction]
#[pyo3(signature = (x, y, f, n, kappa, s = 0.0))]
fn classify(x: Rows, y: Rows, f: usize, n: usize, kappa: f64, s: f64) -> PyResult<(String, f64)> {
    let cfg = SystemConfig::new(f, n, kappa, s).map_err(err)?;
    let (x, y) = (point(x, &cfg)?, point(y, &cfg)?);
    let class = cfs::causal_class(&x, &y, &cfg).map_err(err)?;
    let l = cfs::lagrangian(&x, &y, &cfg).map_err(err)?;
    Ok((class.to_string(), l))
}

/// Run one experiment from a JSON config. Returns `(exit_status, output)`;
/// binary outputs are written to the config's `output` path.
#[pyfunction]
fn run_experiment(config_json: &str) -> PyResult<(i32, String)> {
    let v: serde_json::Value =
        serde_json::from_str(config_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let cfg = ExperimentConfig::from_json(&v).map_err(err)?;
    let out = experiment::run(&cfg);
    if let Some(msg) = out.error {
        return Ok((out.status.code(), msg));
    }
    let text = match (&cfg.output, out.summary) {
        (Some(path), summary) => {
            std::fs::write(path, &out.primary)
                .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
            summary.unwrap_or_default()
        }
        (None, Some(_)) => {
            return Err(PyValueError::new_err(format!(
                "{} needs an output path",
                cfg.command
            )))
        }
        (None, None) => out.primary,
    };
    Ok((
        out.status.code(),
        String::from_utf8_lossy(&text).into_owned(),
    ))
}

#[pymodule]
fn octocfs(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOctonion>()?;
    m.add_function(wrap_pyfunction!(clifford_dim, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_charges, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add("__version__", experiment::VERSION)?;
    Ok(())
}
