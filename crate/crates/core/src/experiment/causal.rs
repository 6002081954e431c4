use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Deserialize;
use serde_json::{json, Value};

use super::{fmt_f64, params, to_value, Computed, Table};
use crate::cfs::point::{matrix_from_json, operator_norm, CMatrix};
use crate::cfs::random::random_point;
use crate::cfs::spectrum::{lagrangian_from_spectrum, CLASS_TOL};
use crate::cfs::spin::unitarity_residual;
use crate::cfs::{
    self, closed_chain_deviation, completeness_check, holonomy, lagrangian_first_term,
    product_spectrum, spin_connection, spin_space, validate_point, AffineFamily, DiscreteMeasure,
    MinimizeOptions, OperatorPoint, SystemConfig,
};
use crate::{Error, Result};

fn complex_list(values: &[Complex64]) -> Value {
    json!(values.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureParams {
    measure: Value,
}

pub fn action(p: &Value) -> Result<Computed> {
    let mp: MeasureParams = params(p)?;
    let (measure, cfg) = DiscreteMeasure::from_json(&mp.measure)?;
    let s = cfs::action(&measure, &cfg)?;
    let (volume, trace) = cfs::constraints(&measure);
    let mut table = Table::new(&["point", "weight", "trace", "p", "q", "ell"]);
    let mut points = Vec::new();
    for (i, (x, w)) in measure.points().iter().zip(measure.weights()).enumerate() {
        let sig = spin_space(x).signature;
        let l = cfs::ell(x, &measure, &cfg)?;
        table.push(vec![
            i.to_string(),
            fmt_f64(*w),
            fmt_f64(x.trace()),
            sig.p.to_string(),
            sig.q.to_string(),
            fmt_f64(l),
        ]);
        points.push(json!({"index": i, "weight": w, "trace": x.trace(), "signature": to_value(&sig), "ell": l}));
    }
    Ok(Computed::new(json!({
        "action": s,
        "volume": volume,
        "trace": trace,
        "points": points,
        "system": to_value(&cfg),
    }))
    .table(table))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifyParams {
    config: SystemConfig,
    #[serde(default)]
    pairs: Vec<[Value; 2]>,
    /// Additional random pairs drawn from the seed.
    #[serde(default)]
    random: usize,
    /// Turn the kernel identities into pass/fail checks.
    #[serde(default)]
    verify: bool,
}

fn random_vector(rng: &mut ChaCha8Rng, f: usize) -> DVector<Complex64> {
    DVector::from_fn(f, |_, _| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    })
}

pub fn classify(p: &Value, seed: u64, tol: Option<f64>) -> Result<Computed> {
    let cp: ClassifyParams = params(p)?;
    let cfg = cp.config;
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(OperatorPoint, OperatorPoint)> = Vec::new();
    for [x, y] in &cp.pairs {
        pairs.push((
            validate_point(matrix_from_json(x)?, &cfg)?,
            validate_point(matrix_from_json(y)?, &cfg)?,
        ));
    }
    for _ in 0..cp.random {
        pairs.push((random_point(&mut rng, &cfg), random_point(&mut rng, &cfg)));
    }
    if pairs.is_empty() {
        return Err(Error::Config(
            "give pairs or a positive random count".into(),
        ));
    }
    let first_term_tol = tol.unwrap_or(1e-12);
    let (chain_tol, completeness_tol) = (1e-8, 1e-10);
    let mut table = Table::new(&["pair", "class", "rank", "first_term", "lagrangian"]);
    let mut rows = Vec::new();
    let (mut worst_first, mut worst_chain, mut worst_complete) = (0.0f64, 0.0f64, 0.0f64);
    for (i, (x, y)) in pairs.iter().enumerate() {
        let spec = product_spectrum(x, y, &cfg)?;
        let class = cfs::spectrum::classify_spectrum(&spec);
        let first = lagrangian_first_term(&spec);
        let lag = lagrangian_from_spectrum(&spec, cfg.kappa);
        if class == cfs::CausalClass::Spacelike {
            worst_first = worst_first.max(first.abs());
        }
        let chain = closed_chain_deviation(x, y, &cfg)?;
        worst_chain = worst_chain.max(chain);
        let (sx, sy) = (spin_space(x), spin_space(y));
        let phi = random_vector(&mut rng, cfg.f);
        let complete = completeness_check(&sx, &sy, &phi);
        worst_complete = worst_complete.max(complete);
        let connection = match spin_connection(&sx, &sy) {
            Ok(d) => json!({"unitarity_residual": unitarity_residual(&d, &sx, &sy)}),
            Err(e) => json!({"error": e.to_string()}),
        };
        table.push(vec![
            i.to_string(),
            class.to_string(),
            spec.rank().to_string(),
            fmt_f64(first),
            fmt_f64(lag),
        ]);
        rows.push(json!({
            "pair": i,
            "class": class,
            "spectrum": complex_list(spec.values()),
            "first_term": first,
            "lagrangian": lag,
            "closed_chain_deviation": chain,
            "completeness_residual": complete,
            "connection": connection,
        }));
    }
    let mut out = Computed::new(json!({
        "pairs": rows,
        "spacelike_first_term_max": worst_first,
        "closed_chain_deviation_max": worst_chain,
        "completeness_residual_max": worst_complete,
    }))
    .table(table)
    .tol("class", CLASS_TOL)
    .tol("spacelike_first_term", first_term_tol)
    .tol("closed_chain", chain_tol)
    .tol("completeness", completeness_tol);
    if cp.verify {
        out = out.passed(
            worst_first <= first_term_tol
                && worst_chain <= chain_tol
                && worst_complete <= completeness_tol,
        );
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MinimizeParams {
    family: Value,
    kappa: f64,
    #[serde(default = "one")]
    n: usize,
    #[serde(default)]
    s: f64,
    #[serde(default)]
    options: Option<MinimizeOptions>,
}

fn one() -> usize {
    1
}

pub fn minimize(p: &Value, seed: u64) -> Result<Computed> {
    let mp: MinimizeParams = params(p)?;
    let family = AffineFamily::from_json(&mp.family)?;
    let cfg = SystemConfig::new(family.dim(), mp.n, mp.kappa, mp.s)?;
    let mut opts = mp.options.unwrap_or_default();
    opts.seed = seed;
    let (measure, report) = cfs::minimize(&family, &cfg, &opts)?;
    let mut table = Table::new(&["point", "weight", "trace", "ell"]);
    for (i, (x, w)) in measure.points().iter().zip(measure.weights()).enumerate() {
        table.push(vec![
            i.to_string(),
            fmt_f64(*w),
            fmt_f64(x.trace()),
            fmt_f64(
                report
                    .euler_lagrange
                    .ell_support
                    .get(i)
                    .copied()
                    .unwrap_or(f64::NAN),
            ),
        ]);
    }
    Ok(Computed::new(json!({
        "report": to_value(&report),
        "measure": measure.to_json(&cfg),
        "options": to_value(&opts),
    }))
    .table(table)
    .tol("grad", opts.grad_tol)
    .tol("constraint", opts.constraint_tol))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ElParams {
    measure: Value,
    #[serde(default = "default_probes")]
    probes: usize,
}

fn default_probes() -> usize {
    200
}

pub fn el_residual(p: &Value, seed: u64) -> Result<Computed> {
    let ep: ElParams = params(p)?;
    let (measure, cfg) = DiscreteMeasure::from_json(&ep.measure)?;
    let report = cfs::el_report(&measure, &cfg, ep.probes, seed)?;
    let spaces: Vec<_> = measure.points().iter().map(spin_space).collect();
    let mut holonomies = Vec::new();
    for (i, w) in spaces.windows(3).enumerate() {
        let entry = match holonomy(&w[0], &w[1], &w[2]) {
            Ok(h) => {
                let id = CMatrix::identity(h.nrows(), h.ncols());
                json!({"start": i, "deviation_from_identity": operator_norm(&(h - id))})
            }
            Err(e) => json!({"start": i, "error": e.to_string()}),
        };
        holonomies.push(entry);
    }
    let mut table = Table::new(&["point", "weight", "ell"]);
    for (i, (l, w)) in report.ell_support.iter().zip(measure.weights()).enumerate() {
        table.push(vec![i.to_string(), fmt_f64(*w), fmt_f64(*l)]);
    }
    Ok(Computed::new(json!({
        "euler_lagrange": to_value(&report),
        "holonomies": holonomies,
        "system": to_value(&cfg),
    }))
    .table(table))
}
