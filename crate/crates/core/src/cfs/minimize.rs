//! Constrained minimization of the causal action over a parametrized family of
//! discrete measures.
//!
//! Weights live on the simplex through softmax logits (the first logit fixed to
//! zero), the trace constraint is handled by an augmented Lagrangian, and the
//! inner problem is solved by BFGS on central finite-difference gradients.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::point::{
    hermitian_defect, hermitian_eigen, matrix_from_json, matrix_to_json, operator_norm,
    validate_point, CMatrix, DiscreteMeasure, OperatorPoint, SystemConfig, DUPLICATE_TOL,
};
use super::random::random_point;
use super::spectrum::{integrated_lagrangian, lagrangian};
use crate::{Error, Result};

/// Points `x_i(theta) = C_i + sum_k theta_k B_ik` with Hermitian `C_i`, `B_ik`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineFamily {
    pub offsets: Vec<CMatrix>,
    pub directions: Vec<Vec<CMatrix>>,
    pub initial_params: Vec<f64>,
    pub initial_weights: Option<Vec<f64>>,
}

impl AffineFamily {
    pub fn new(
        offsets: Vec<CMatrix>,
        directions: Vec<Vec<CMatrix>>,
        initial_params: Vec<f64>,
        initial_weights: Option<Vec<f64>>,
    ) -> Result<Self> {
        let fam = AffineFamily {
            offsets,
            directions,
            initial_params,
            initial_weights,
        };
        fam.validate()?;
        Ok(fam)
    }

    fn validate(&self) -> Result<()> {
        let m = self.offsets.len();
        if m == 0 || self.directions.len() != m {
            return Err(Error::Config(
                "family needs one direction list per point".into(),
            ));
        }
        let f = self.offsets[0].nrows();
        let k = self.initial_params.len();
        for (c, dirs) in self.offsets.iter().zip(&self.directions) {
            if dirs.len() != k {
                return Err(Error::Config(format!("each point needs {k} directions")));
            }
            for b in std::iter::once(c).chain(dirs) {
                if b.nrows() != f || b.ncols() != f {
                    return Err(Error::Config(format!("family matrices must be {f}x{f}")));
                }
                if hermitian_defect(b) > 1e-12 {
                    return Err(Error::Config("family matrices must be Hermitian".into()));
                }
            }
        }
        if let Some(w) = &self.initial_weights {
            if w.len() != m || w.iter().any(|&v| !(v > 0.0)) {
                return Err(Error::Config(
                    "initial weights must be positive, one per point".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.offsets[0].nrows()
    }

    pub fn num_points(&self) -> usize {
        self.offsets.len()
    }

    pub fn num_params(&self) -> usize {
        self.initial_params.len()
    }

    pub fn points(&self, params: &[f64]) -> Vec<CMatrix> {
        self.offsets
            .iter()
            .zip(&self.directions)
            .map(|(c, dirs)| {
                let mut m = c.clone();
                for (b, &t) in dirs.iter().zip(params) {
                    m += b * Complex64::new(t, 0.0);
                }
                m
            })
            .collect()
    }

    /// Two points `diag(a, 0)` and `diag(0, c)` in dimension 2, parameters `(a, c)`.
    pub fn diagonal_pair(a0: f64, c0: f64) -> Self {
        let e = |i: usize| {
            let mut m = CMatrix::zeros(2, 2);
            m[(i, i)] = Complex64::new(1.0, 0.0);
            m
        };
        let z = CMatrix::zeros(2, 2);
        AffineFamily {
            offsets: vec![z.clone(), z.clone()],
            directions: vec![vec![e(0), z.clone()], vec![z, e(1)]],
            initial_params: vec![a0, c0],
            initial_weights: None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": "affine",
            "points": self.offsets.iter().zip(&self.directions).map(|(c, d)| serde_json::json!({
                "offset": matrix_to_json(c),
                "directions": d.iter().map(matrix_to_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "initial_params": self.initial_params,
            "initial_weights": self.initial_weights,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct RawPoint {
            offset: serde_json::Value,
            directions: Vec<serde_json::Value>,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            kind: String,
            points: Vec<RawPoint>,
            initial_params: Vec<f64>,
            #[serde(default)]
            initial_weights: Option<Vec<f64>>,
        }
        let raw: Raw = serde_json::from_value(v.clone())?;
        if raw.kind != "affine" {
            return Err(Error::Config(format!("unknown family kind {:?}", raw.kind)));
        }
        let mut offsets = Vec::new();
        let mut directions = Vec::new();
        for p in &raw.points {
            offsets.push(matrix_from_json(&p.offset)?);
            directions.push(
                p.directions
                    .iter()
                    .map(matrix_from_json)
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        AffineFamily::new(offsets, directions, raw.initial_params, raw.initial_weights)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MinimizeOptions {
    pub max_outer: usize,
    pub max_inner: usize,
    pub grad_tol: f64,
    pub constraint_tol: f64,
    pub penalty_start: f64,
    pub penalty_growth: f64,
    /// Relative central-difference step.
    pub fd_step: f64,
    pub probe_count: usize,
    pub seed: u64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            max_outer: 40,
            max_inner: 1000,
            grad_tol: 1e-9,
            constraint_tol: 1e-10,
            penalty_start: 10.0,
            penalty_growth: 10.0,
            fd_step: 1e-6,
            probe_count: 200,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimizeReport {
    pub action: f64,
    pub volume: f64,
    pub trace: f64,
    pub params: Vec<f64>,
    pub weights: Vec<f64>,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
    pub euler_lagrange: ElReport,
}

/// Euler-Lagrange diagnostics of a measure.
#[derive(Debug, Clone, Serialize)]
pub struct ElReport {
    /// `l(x_i)` on the support with the configured `s`.
    pub ell_support: Vec<f64>,
    pub ell_spread: f64,
    /// Value of `s` making the minimum of `l` over the support vanish.
    pub s_post_hoc: f64,
    /// `max(-l)` over the probe set, with `s = s_post_hoc`.
    pub probe_max_neg_ell: f64,
    pub probe_count: usize,
}

pub fn el_report(
    measure: &DiscreteMeasure,
    cfg: &SystemConfig,
    probe_count: usize,
    seed: u64,
) -> Result<ElReport> {
    let raw: Vec<f64> = measure
        .points()
        .iter()
        .map(|x| integrated_lagrangian(x, measure, cfg))
        .collect::<Result<_>>()?;
    let s_post = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max) - s_post;
    let probes = probe_points(measure, cfg, probe_count, seed);
    let probe_raw: Vec<f64> = probes
        .par_iter()
        .map(|x| integrated_lagrangian(x, measure, cfg))
        .collect::<Result<_>>()?;
    let probe_max_neg_ell = probe_raw
        .iter()
        .map(|r| s_post - r)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(ElReport {
        ell_support: raw.iter().map(|r| r - cfg.s).collect(),
        ell_spread: spread,
        s_post_hoc: s_post,
        probe_max_neg_ell,
        probe_count: probes.len(),
    })
}

struct Problem<'a> {
    family: &'a AffineFamily,
    cfg: &'a SystemConfig,
    k: usize,
}

struct Eval {
    action: f64,
    trace_defect: f64,
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let s: f64 = e.iter().sum();
    e.iter().map(|v| v / s).collect()
}

impl Problem<'_> {
    fn split<'z>(&self, z: &'z [f64]) -> (&'z [f64], Vec<f64>) {
        let mut logits = vec![0.0];
        logits.extend_from_slice(&z[self.k..]);
        (&z[..self.k], softmax(&logits))
    }

    fn points(&self, params: &[f64]) -> Option<Vec<OperatorPoint>> {
        self.family
            .points(params)
            .into_iter()
            .map(|m| validate_point(m, self.cfg).ok())
            .collect()
    }

    fn eval(&self, z: &[f64]) -> Option<Eval> {
        let (params, w) = self.split(z);
        let pts = self.points(params)?;
        let m = pts.len();
        let mut action = 0.0;
        for i in 0..m {
            for j in i..m {
                let l = lagrangian(&pts[i], &pts[j], self.cfg).ok()?;
                action += if i == j { 1.0 } else { 2.0 } * w[i] * w[j] * l;
            }
        }
        let trace: f64 = pts.iter().zip(&w).map(|(p, wi)| wi * p.trace()).sum();
        Some(Eval {
            action,
            trace_defect: trace - 1.0,
        })
    }

    fn merit(&self, z: &[f64], lambda: f64, mu: f64) -> f64 {
        match self.eval(z) {
            Some(e) => {
                e.action + lambda * e.trace_defect + 0.5 * mu * e.trace_defect * e.trace_defect
            }
            None => f64::INFINITY,
        }
    }

    fn gradient(&self, z: &[f64], lambda: f64, mu: f64, step: f64) -> Vec<f64> {
        (0..z.len())
            .map(|i| {
                let h = step * z[i].abs().max(1.0);
                let mut zp = z.to_vec();
                let mut zm = z.to_vec();
                zp[i] += h;
                zm[i] -= h;
                (self.merit(&zp, lambda, mu) - self.merit(&zm, lambda, mu)) / (2.0 * h)
            })
            .collect()
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// BFGS on the merit function; returns the number of iterations taken.
fn bfgs(
    problem: &Problem,
    z: &mut Vec<f64>,
    lambda: f64,
    mu: f64,
    opts: &MinimizeOptions,
) -> Result<usize> {
    let d = z.len();
    let mut h = DMatrix::<f64>::identity(d, d);
    let mut g = DVector::from_vec(problem.gradient(z, lambda, mu, opts.fd_step));
    let mut fz = problem.merit(z, lambda, mu);
    for it in 0..opts.max_inner {
        if inf_norm(g.as_slice()) <= opts.grad_tol {
            return Ok(it);
        }
        let mut dir = -(&h * &g);
        let mut slope = g.dot(&dir);
        if !(slope < 0.0) {
            h = DMatrix::identity(d, d);
            dir = -g.clone();
            slope = g.dot(&dir);
        }
        let mut t = 1.0;
        let mut accepted = None;
        const MAX_BACKTRACK: usize = 60;
        for _ in 0..MAX_BACKTRACK {
            let trial: Vec<f64> = z.iter().zip(dir.iter()).map(|(a, b)| a + t * b).collect();
            let ft = problem.merit(&trial, lambda, mu);
            if ft <= fz + 1e-4 * t * slope {
                accepted = Some((trial, ft));
                break;
            }
            t *= 0.5;
        }
        let Some((trial, ft)) = accepted else {
            // Finite-difference noise floor: no descent left to find.
            if inf_norm(g.as_slice()) <= 1e-5 {
                return Ok(it);
            }
            return Err(Error::LineSearchFailure(MAX_BACKTRACK));
        };
        let g_new = DVector::from_vec(problem.gradient(&trial, lambda, mu, opts.fd_step));
        let s = DVector::from_iterator(d, trial.iter().zip(z.iter()).map(|(a, b)| a - b));
        let y = &g_new - &g;
        let sy = s.dot(&y);
        if sy > 1e-16 * s.norm() * y.norm() && sy > 0.0 {
            let rho = 1.0 / sy;
            let i = DMatrix::<f64>::identity(d, d);
            let left = &i - &s * y.transpose() * rho;
            let right = &i - &y * s.transpose() * rho;
            h = &left * &h * &right + &s * s.transpose() * rho;
        }
        let improvement = fz - ft;
        *z = trial;
        g = g_new;
        fz = ft;
        if improvement.abs() <= 1e-16 * fz.abs().max(1.0) && inf_norm(g.as_slice()) <= 1e-6 {
            return Ok(it + 1);
        }
    }
    Err(Error::MaxIterations(opts.max_inner))
}

/// Keep the `n` largest positive and `n` most negative eigenvalues.
fn truncate_signature(m: &CMatrix, n: usize) -> CMatrix {
    let (eigs, vecs) = hermitian_eigen(m);
    let mut order: Vec<usize> = (0..eigs.len()).collect();
    order.sort_by(|&a, &b| eigs[b].total_cmp(&eigs[a]));
    let keep_pos: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| eigs[i] > 0.0)
        .take(n)
        .collect();
    let keep_neg: Vec<usize> = order
        .iter()
        .rev()
        .copied()
        .filter(|&i| eigs[i] < 0.0)
        .take(n)
        .collect();
    let mut out = CMatrix::zeros(m.nrows(), m.ncols());
    for i in keep_pos.into_iter().chain(keep_neg) {
        let v = vecs.column(i);
        out += v * v.adjoint() * Complex64::new(eigs[i], 0.0);
    }
    out
}

/// Merge support points closer than the duplicate tolerance and drop zero weights.
fn merge_support(points: Vec<OperatorPoint>, weights: Vec<f64>) -> (Vec<OperatorPoint>, Vec<f64>) {
    let mut out_p: Vec<OperatorPoint> = Vec::new();
    let mut out_w: Vec<f64> = Vec::new();
    for (p, w) in points.into_iter().zip(weights) {
        if w <= 0.0 {
            continue;
        }
        match out_p
            .iter()
            .position(|q| operator_norm(&(q.matrix() - p.matrix())) <= DUPLICATE_TOL)
        {
            Some(i) => out_w[i] += w,
            None => {
                out_p.push(p);
                out_w.push(w);
            }
        }
    }
    let total: f64 = out_w.iter().sum();
    for w in &mut out_w {
        *w /= total;
    }
    (out_p, out_w)
}

pub fn minimize(
    family: &AffineFamily,
    cfg: &SystemConfig,
    opts: &MinimizeOptions,
) -> Result<(DiscreteMeasure, MinimizeReport)> {
    cfg.validate()?;
    family.validate()?;
    if family.dim() != cfg.f {
        return Err(Error::Config(format!(
            "family dimension {} does not match f = {}",
            family.dim(),
            cfg.f
        )));
    }
    let problem = Problem {
        family,
        cfg,
        k: family.num_params(),
    };
    let m = family.num_points();
    let mut z = family.initial_params.clone();
    let w0 = family
        .initial_weights
        .clone()
        .unwrap_or_else(|| vec![1.0; m]);
    z.extend(w0[1..].iter().map(|w| (w / w0[0]).ln()));
    if let Some(bad) = family
        .points(&family.initial_params)
        .into_iter()
        .map(|p| validate_point(p, cfg))
        .find_map(|r| r.err())
    {
        return Err(Error::InfeasibleStart(bad.to_string()));
    }

    let mut lambda = 0.0;
    let mut mu = opts.penalty_start;
    let mut prev_defect = f64::INFINITY;
    let mut inner_total = 0;
    let mut outer = 0;
    loop {
        if outer == opts.max_outer {
            return Err(Error::MaxIterations(opts.max_outer));
        }
        outer += 1;
        inner_total += bfgs(&problem, &mut z, lambda, mu, opts)?;
        let e = problem
            .eval(&z)
            .ok_or_else(|| Error::Numerical("iterate left the admissible set".into()))?;
        let defect = e.trace_defect.abs();
        if defect <= opts.constraint_tol {
            break;
        }
        lambda += mu * e.trace_defect;
        if defect > 0.25 * prev_defect {
            mu *= opts.penalty_growth;
        }
        prev_defect = defect;
    }

    let (params, weights) = problem.split(&z);
    let params = params.to_vec();
    let points = problem
        .points(&params)
        .ok_or_else(|| Error::Numerical("final iterate is not admissible".into()))?;
    let (points, weights) = merge_support(points, weights);
    let measure = DiscreteMeasure::new(points, weights)?;
    let action = super::spectrum::action(&measure, cfg)?;
    let (volume, trace) = super::spectrum::constraints(&measure);

    let euler_lagrange = el_report(&measure, cfg, opts.probe_count, opts.seed)?;
    let report = MinimizeReport {
        action,
        volume,
        trace,
        params,
        weights: measure.weights().to_vec(),
        outer_iterations: outer,
        inner_iterations: inner_total,
        euler_lagrange,
    };
    Ok((measure, report))
}

/// Half perturbed support points, half random points of maximal rank.
pub fn probe_points(
    measure: &DiscreteMeasure,
    cfg: &SystemConfig,
    count: usize,
    seed: u64,
) -> Vec<OperatorPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        if i % 2 == 0 {
            let base = &measure.points()[(i / 2) % measure.len()];
            let scale = 1e-2 * operator_norm(base.matrix()).max(1e-3);
            let mut h = CMatrix::from_fn(cfg.f, cfg.f, |_, _| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            });
            h = (&h + h.adjoint()) * Complex64::new(0.5 * scale, 0.0);
            let m = truncate_signature(&(base.matrix() + h), cfg.n);
            out.push(OperatorPoint::from_matrix_unchecked(m));
        } else {
            out.push(random_point(&mut rng, cfg));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn softmax_is_normalized() {
        let w = softmax(&[0.0, 1.0, -2.0]);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(w[1] > w[0] && w[0] > w[2]);
    }

    #[test]
    fn toy_problem_reaches_symmetric_optimum() {
        let kappa = 0.5;
        let cfg = SystemConfig::new(2, 1, kappa, 0.0).unwrap();
        let fam = AffineFamily::diagonal_pair(0.7, 1.6);
        let (measure, report) = minimize(&fam, &cfg, &MinimizeOptions::default()).unwrap();
        assert!(
            (report.action - (0.5 + kappa) / 2.0).abs() < 1e-7,
            "{report:?}"
        );
        assert!((report.trace - 1.0).abs() < 1e-8);
        assert_eq!(measure.len(), 2);
        assert!(report.euler_lagrange.ell_spread < 1e-5 * (1.0 + report.action));
    }

    #[test]
    fn identical_points_collapse() {
        // Both points follow the same parameter, so the measure is a single point.
        let cfg = SystemConfig::new(2, 1, 0.5, 0.0).unwrap();
        let e0 = {
            let mut m = CMatrix::zeros(2, 2);
            m[(0, 0)] = Complex64::new(1.0, 0.0);
            m
        };
        let z = CMatrix::zeros(2, 2);
        let fam = AffineFamily::new(
            vec![z.clone(), z],
            vec![vec![e0.clone()], vec![e0]],
            vec![0.6],
            None,
        )
        .unwrap();
        let (measure, report) = minimize(&fam, &cfg, &MinimizeOptions::default()).unwrap();
        assert_eq!(measure.len(), 1);
        assert!((report.params[0] - 1.0).abs() < 1e-6);
        assert!((report.action - (0.5 + 0.5)).abs() < 1e-6);
    }

    #[test]
    fn infeasible_start_is_reported() {
        let cfg = SystemConfig::new(2, 1, 0.5, 0.0).unwrap();
        let fam =
            AffineFamily::new(vec![CMatrix::identity(2, 2)], vec![vec![]], vec![], None).unwrap();
        assert!(matches!(
            minimize(&fam, &cfg, &MinimizeOptions::default()),
            Err(Error::InfeasibleStart(_))
        ));
    }

    #[test]
    fn family_json_round_trip() {
        let fam = AffineFamily::diagonal_pair(0.5, 2.0);
        assert_eq!(AffineFamily::from_json(&fam.to_json()).unwrap(), fam);
    }

    #[test]
    fn truncation_respects_signature() {
        let m = super::super::point::diag(&[3.0, 2.0, -1.0, -0.5, 0.1]);
        let t = truncate_signature(&m, 1);
        assert_eq!(t, super::super::point::diag(&[3.0, 0.0, -1.0, 0.0, 0.0]));
    }
}
