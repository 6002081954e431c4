use nalgebra::Schur;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::point::{
    operator_norm, CMatrix, DiscreteMeasure, OperatorPoint, SystemConfig, RANK_TOL,
};
use crate::{Error, Result};

/// Relative tolerance for "all moduli equal" and "all values real".
pub const CLASS_TOL: f64 = 1e-8;

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 10_000;

/// Non-zero eigenvalues of `xy`, padded with zeros to length `2n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSpectrum {
    values: Vec<Complex64>,
    rank: usize,
}

impl ProductSpectrum {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Number of eigenvalues counted as non-zero.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm()).collect()
    }

    pub fn from_values(mut values: Vec<Complex64>, n: usize) -> Result<Self> {
        let rank = values.iter().filter(|z| z.norm() > 0.0).count();
        if values.len() > 2 * n {
            return Err(Error::Domain(format!(
                "{} eigenvalues exceed 2n = {}",
                values.len(),
                2 * n
            )));
        }
        values.resize(2 * n, Complex64::new(0.0, 0.0));
        sort_spectrum(&mut values);
        Ok(ProductSpectrum { values, rank })
    }
}

fn sort_spectrum(values: &mut [Complex64]) {
    values.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(a.re.total_cmp(&b.re))
            .then(a.im.total_cmp(&b.im))
    });
}

/// All eigenvalues of a general complex matrix, with algebraic multiplicity.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(m.clone(), SCHUR_EPS, SCHUR_MAX_ITER).ok_or_else(|| {
        Error::Numerical(format!(
            "Schur iteration did not converge in {SCHUR_MAX_ITER} steps (dimension {}, norm {:.3e})",
            m.nrows(),
            operator_norm(m)
        ))
    })?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Non-zero eigenvalues of `a * b`, keeping at most `2n` by modulus.
pub(crate) fn nonzero_product_eigenvalues(
    a: &CMatrix,
    b: &CMatrix,
    n: usize,
) -> Result<(Vec<Complex64>, f64)> {
    let prod = a * b;
    let scale = operator_norm(a) * operator_norm(b);
    let mut eigs = eigenvalues(&prod)?;
    let cut = RANK_TOL * scale;
    eigs.retain(|z| z.norm() > cut);
    sort_spectrum(&mut eigs);
    eigs.truncate(2 * n);
    Ok((eigs, cut))
}

pub fn product_spectrum(
    x: &OperatorPoint,
    y: &OperatorPoint,
    cfg: &SystemConfig,
) -> Result<ProductSpectrum> {
    let (eigs, _) = nonzero_product_eigenvalues(x.matrix(), y.matrix(), cfg.n)?;
    ProductSpectrum::from_values(eigs, cfg.n)
}

/// `(1/4n) sum_{i,j} (|l_i| - |l_j|)^2`
pub fn lagrangian_first_term(spec: &ProductSpectrum) -> f64 {
    let m = spec.moduli();
    let n = m.len() / 2;
    let mut acc = 0.0;
    for a in &m {
        for b in &m {
            acc += (a - b) * (a - b);
        }
    }
    acc / (4.0 * n as f64)
}

pub fn lagrangian_from_spectrum(spec: &ProductSpectrum, kappa: f64) -> f64 {
    let total: f64 = spec.moduli().iter().sum();
    lagrangian_first_term(spec) + kappa * total * total
}

pub fn lagrangian(x: &OperatorPoint, y: &OperatorPoint, cfg: &SystemConfig) -> Result<f64> {
    Ok(lagrangian_from_spectrum(
        &product_spectrum(x, y, cfg)?,
        cfg.kappa,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalClass {
    Spacelike,
    Timelike,
    Lightlike,
}

impl std::fmt::Display for CausalClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CausalClass::Spacelike => "spacelike",
            CausalClass::Timelike => "timelike",
            CausalClass::Lightlike => "lightlike",
        };
        f.write_str(s)
    }
}

pub fn classify_spectrum(spec: &ProductSpectrum) -> CausalClass {
    let m = spec.moduli();
    let max = m.iter().copied().fold(0.0, f64::max);
    let min = m.iter().copied().fold(f64::INFINITY, f64::min);
    if max == 0.0 || (max - min) / max <= CLASS_TOL {
        return CausalClass::Spacelike;
    }
    if spec.values().iter().all(|z| z.im.abs() <= CLASS_TOL * max) {
        CausalClass::Timelike
    } else {
        CausalClass::Lightlike
    }
}

pub fn causal_class(
    x: &OperatorPoint,
    y: &OperatorPoint,
    cfg: &SystemConfig,
) -> Result<CausalClass> {
    Ok(classify_spectrum(&product_spectrum(x, y, cfg)?))
}

/// Double sum over all ordered pairs, diagonal included.
pub fn action(measure: &DiscreteMeasure, cfg: &SystemConfig) -> Result<f64> {
    let m = measure.len();
    let pts = measure.points();
    let w = measure.weights();
    // Upper triangle in parallel, summed serially for a fixed rounding order.
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
    let terms = pairs
        .par_iter()
        .map(|&(i, j)| {
            let l = lagrangian(&pts[i], &pts[j], cfg)?;
            let mult = if i == j { 1.0 } else { 2.0 };
            Ok(mult * w[i] * w[j] * l)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(terms.iter().sum())
}

/// `(volume, trace)` integrals of the measure.
pub fn constraints(measure: &DiscreteMeasure) -> (f64, f64) {
    let volume = measure.weights().iter().sum();
    let trace = measure
        .points()
        .iter()
        .zip(measure.weights())
        .map(|(p, w)| w * p.trace())
        .sum();
    (volume, trace)
}

/// `int L(x, y) drho(y)`, without subtracting `s`.
pub fn integrated_lagrangian(
    x: &OperatorPoint,
    measure: &DiscreteMeasure,
    cfg: &SystemConfig,
) -> Result<f64> {
    let mut acc = 0.0;
    for (p, w) in measure.points().iter().zip(measure.weights()) {
        acc += w * lagrangian(x, p, cfg)?;
    }
    Ok(acc)
}

pub fn ell(x: &OperatorPoint, measure: &DiscreteMeasure, cfg: &SystemConfig) -> Result<f64> {
    Ok(integrated_lagrangian(x, measure, cfg)? - cfg.s)
}
