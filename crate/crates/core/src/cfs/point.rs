use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Relative threshold below which an eigenvalue counts as zero.
pub const RANK_TOL: f64 = 1e-9;
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Minimum operator-norm distance between support points of a measure.
pub const DUPLICATE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub f: usize,
    pub n: usize,
    pub kappa: f64,
    #[serde(default)]
    pub s: f64,
}

impl SystemConfig {
    pub fn new(f: usize, n: usize, kappa: f64, s: f64) -> Result<Self> {
        let cfg = SystemConfig { f, n, kappa, s };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.f == 0 || self.n == 0 {
            return Err(Error::Config(format!(
                "f = {} and n = {} must be positive",
                self.f, self.n
            )));
        }
        if !(self.kappa > 0.0) || !self.kappa.is_finite() {
            return Err(Error::Config(format!(
                "kappa must be positive, got {}",
                self.kappa
            )));
        }
        if !(self.s >= 0.0) || !self.s.is_finite() {
            return Err(Error::Config(format!(
                "s must be non-negative, got {}",
                self.s
            )));
        }
        Ok(())
    }
}

/// Spectral norm of a Hermitian matrix, or the largest singular value otherwise.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermitian_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Eigen-decomposition of a Hermitian matrix, symmetrized first.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Numbers of eigenvalues above `tol` and below `-tol`.
pub(crate) fn signature_counts(eigenvalues: &[f64], tol: f64) -> (usize, usize) {
    let p = eigenvalues.iter().filter(|&&l| l > tol).count();
    let q = eigenvalues.iter().filter(|&&l| l < -tol).count();
    (p, q)
}

pub(crate) fn zero_threshold(eigenvalues: &[f64]) -> f64 {
    let scale = eigenvalues.iter().fold(0.0f64, |a, l| a.max(l.abs()));
    RANK_TOL * scale
}

/// A Hermitian operator with at most `n` positive and `n` negative eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPoint {
    matrix: CMatrix,
}

impl OperatorPoint {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        OperatorPoint { matrix }
    }
}

pub fn validate_point(m: CMatrix, cfg: &SystemConfig) -> Result<OperatorPoint> {
    if m.nrows() != cfg.f || m.ncols() != cfg.f {
        return Err(Error::Domain(format!(
            "expected a {f}x{f} matrix, got {}x{}",
            m.nrows(),
            m.ncols(),
            f = cfg.f
        )));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    let defect = hermitian_defect(&m);
    let scale = max_abs(&m).max(1.0);
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(defect));
    }
    let (eigs, _) = hermitian_eigen(&m);
    let (positive, negative) = signature_counts(&eigs, zero_threshold(&eigs));
    if positive > cfg.n || negative > cfg.n {
        return Err(Error::SignatureViolation {
            positive,
            negative,
            n: cfg.n,
        });
    }
    Ok(OperatorPoint { matrix: m })
}

/// Real diagonal matrix helper.
pub fn diag(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| Complex64::new(v, 0.0)),
    ))
}

/// Real matrix from row-major rows.
pub fn real_matrix(rows: &[Vec<f64>]) -> CMatrix {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    CMatrix::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
}

/// Matrices are written as rows of `[re, im]` pairs; rows of plain numbers are accepted on input.
pub fn matrix_to_json(m: &CMatrix) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = (0..m.nrows())
        .map(|i| {
            serde_json::Value::Array(
                (0..m.ncols())
                    .map(|j| serde_json::json!([m[(i, j)].re, m[(i, j)].im]))
                    .collect(),
            )
        })
        .collect();
    serde_json::Value::Array(rows)
}

pub fn matrix_from_json(v: &serde_json::Value) -> Result<CMatrix> {
    let bad = |msg: &str| Error::Config(format!("matrix: {msg}"));
    let rows = v
        .as_array()
        .ok_or_else(|| bad("expected an array of rows"))?;
    let nrows = rows.len();
    let mut entries = Vec::new();
    let mut ncols = None;
    for row in rows {
        let row = row.as_array().ok_or_else(|| bad("row is not an array"))?;
        if *ncols.get_or_insert(row.len()) != row.len() {
            return Err(bad("ragged rows"));
        }
        for e in row {
            let z = match e {
                serde_json::Value::Number(x) => Complex64::new(x.as_f64().unwrap_or(f64::NAN), 0.0),
                serde_json::Value::Array(pair) if pair.len() == 2 => {
                    let re = pair[0].as_f64().ok_or_else(|| bad("non-numeric entry"))?;
                    let im = pair[1].as_f64().ok_or_else(|| bad("non-numeric entry"))?;
                    Complex64::new(re, im)
                }
                _ => return Err(bad("entry must be a number or [re, im]")),
            };
            entries.push(z);
        }
    }
    let ncols = ncols.unwrap_or(0);
    Ok(CMatrix::from_row_slice(nrows, ncols, &entries))
}

/// Finitely supported probability measure on operator points.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    points: Vec<OperatorPoint>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(points: Vec<OperatorPoint>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::Domain(format!(
                "{} points and {} weights",
                points.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::Domain("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("weights sum to {total}, expected 1")));
        }
        for i in 0..points.len() {
            for j in 0..i {
                let d = operator_norm(&(points[i].matrix() - points[j].matrix()));
                if d <= DUPLICATE_TOL {
                    return Err(Error::Domain(format!("points {j} and {i} coincide")));
                }
            }
        }
        Ok(DiscreteMeasure { points, weights })
    }

    pub fn points(&self) -> &[OperatorPoint] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_json(&self, cfg: &SystemConfig) -> serde_json::Value {
        serde_json::json!({
            "config": cfg,
            "points": self.points.iter().map(|p| matrix_to_json(p.matrix())).collect::<Vec<_>>(),
            "weights": self.weights,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<(Self, SystemConfig)> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            config: SystemConfig,
            points: Vec<serde_json::Value>,
            weights: Vec<f64>,
        }
        let raw: Raw = serde_json::from_value(v.clone())?;
        raw.config.validate()?;
        let points = raw
            .points
            .iter()
            .map(|m| validate_point(matrix_from_json(m)?, &raw.config))
            .collect::<Result<Vec<_>>>()?;
        Ok((DiscreteMeasure::new(points, raw.weights)?, raw.config))
    }
}

impl Serialize for OperatorPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        matrix_to_json(&self.matrix).serialize(s)
    }
}

impl<'de> Deserialize<'de> for OperatorPoint {
    /// Checks Hermiticity only; the signature bound needs a config.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let m = matrix_from_json(&v).map_err(D::Error::custom)?;
        if m.nrows() != m.ncols() || hermitian_defect(&m) > HERMITIAN_TOL * max_abs(&m).max(1.0) {
            return Err(D::Error::custom("matrix is not square Hermitian"));
        }
        Ok(OperatorPoint { matrix: m })
    }
}
