use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Deserialize;
use serde_json::{json, Value};

use super::{fmt_f64, params, to_value, Computed, Table};
use crate::mult_algebra::{
    identity_checks, imaginary_generators, left_right_equality, quadratic_relation_check,
    span_dimension, End8, Field, Side,
};
use crate::octonion::{projector, table_csv, ComplexOctonion, Octonion, FANO_LINES};
use crate::witt::{
    charges, classify_representation, ideal_basis, idempotents, state_rank, structure_constants,
    su3_generators, witt_basis, witt_preservation_residual, Ideal,
};
use crate::Result;

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Empty {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct SampleParams {
    samples: usize,
}

impl Default for SampleParams {
    fn default() -> Self {
        SampleParams { samples: 1000 }
    }
}

fn gaussian_octonion(rng: &mut ChaCha8Rng) -> Octonion {
    Octonion::new(std::array::from_fn(|_| StandardNormal.sample(rng)))
}

fn e(i: usize) -> Octonion {
    Octonion::basis(i)
}

struct Checks {
    table: Table,
    rows: Vec<Value>,
    all: bool,
}

impl Checks {
    fn new() -> Self {
        Checks {
            table: Table::new(&["check", "residual", "tol", "pass"]),
            rows: Vec::new(),
            all: true,
        }
    }

    fn push(&mut self, name: &str, residual: f64, tol: f64) {
        self.record(name, residual, Some(tol), residual <= tol);
    }

    /// A check whose pass criterion is decided elsewhere.
    fn record(&mut self, name: &str, residual: f64, tol: Option<f64>, pass: bool) {
        self.all &= pass;
        let tol_cell = tol.map(fmt_f64).unwrap_or_default();
        self.table.push(vec![
            name.to_string(),
            fmt_f64(residual),
            tol_cell,
            pass.to_string(),
        ]);
        self.rows
            .push(json!({"check": name, "residual": residual, "tol": tol, "pass": pass}));
    }
}

pub fn octonion_table(p: &Value) -> Result<Computed> {
    let _: Empty = params(p)?;
    let csv = table_csv();
    let mut lines = csv.lines();
    let _header = lines.next();
    let mut table = Table::new(&["*", "e0", "e1", "e2", "e3", "e4", "e5", "e6", "e7"]);
    let mut rows = Vec::new();
    for line in lines {
        let cells: Vec<String> = line.split(',').map(str::to_string).collect();
        rows.push(json!(cells[1..].to_vec()));
        table.push(cells);
    }
    Ok(Computed::new(json!({"table": rows})).table(table))
}

pub fn octonion_check(p: &Value, seed: u64, tol: Option<f64>) -> Result<Computed> {
    let sp: SampleParams = params(p)?;
    let tol = tol.unwrap_or(1e-12);
    let mut c = Checks::new();

    let mut fano = 0.0f64;
    for [i, j, k] in FANO_LINES {
        for (a, b, r) in [(i, j, k), (j, k, i), (k, i, j)] {
            fano = fano.max(e(a).product(&e(b)).max_abs_diff(&e(r)));
            fano = fano.max(e(b).product(&e(a)).max_abs_diff(&e(r).scale(-1.0)));
        }
    }
    c.push("fano lines cyclic", fano, 0.0);
    c.push(
        "e4(e7e6) = -e5",
        e(4).product(&e(7).product(&e(6)))
            .max_abs_diff(&e(5).scale(-1.0)),
        0.0,
    );
    c.push(
        "(e4e7)e6 = e5",
        e(4).product(&e(7)).product(&e(6)).max_abs_diff(&e(5)),
        0.0,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut norm_err, mut alt_err, mut split_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..sp.samples {
        let a = gaussian_octonion(&mut rng);
        let b = gaussian_octonion(&mut rng);
        let scale = a.norm() * b.norm();
        norm_err = norm_err.max((a.product(&b).norm() - scale).abs() / scale);
        let left = Octonion::associator(&a, &a, &b).norm();
        let right = Octonion::associator(&a, &b, &b).norm();
        alt_err = alt_err.max(left.max(right) / (scale * (a.norm() + b.norm())));
        let z = ComplexOctonion::new(std::array::from_fn(|i| {
            num_complex::Complex64::new(a.coeffs[i], b.coeffs[i])
        }));
        split_err = split_err.max(ComplexOctonion::unsplit(&z.split()).max_abs_diff(&z));
    }
    c.push("norm multiplicativity", norm_err, tol);
    c.push("alternativity", alt_err, tol);
    c.push("split round trip", split_err, 0.0);

    let (rp, rm) = (projector(true), projector(false));
    let proj = rp
        .product(&rp)
        .max_abs_diff(&rp)
        .max(rm.product(&rm).max_abs_diff(&rm))
        .max(rp.product(&rm).max_abs_diff(&ComplexOctonion::zero()))
        .max((rp + rm).max_abs_diff(&ComplexOctonion::one()));
    c.push("projectors idempotent and complementary", proj, tol);

    Ok(
        Computed::new(json!({"checks": c.rows, "samples": sp.samples}))
            .table(c.table)
            .tol("random_identities", tol)
            .tol("exact_identities", 0.0)
            .passed(c.all),
    )
}

fn complexified(gens: Vec<End8>) -> Vec<End8> {
    gens.into_iter()
        .map(|g| End8::new(g.matrix, Field::Complex))
        .collect()
}

pub fn clifford_dim(p: &Value) -> Result<Computed> {
    let _: Empty = params(p)?;
    let real = span_dimension(&imaginary_generators(Side::Left), Field::Real)?;
    let complex = span_dimension(
        &complexified(imaginary_generators(Side::Left)),
        Field::Complex,
    )?;
    let mut table = Table::new(&["field", "dimension", "closure_length"]);
    table.push(vec![
        "real".into(),
        real.dimension.to_string(),
        real.closure_length.to_string(),
    ]);
    table.push(vec![
        "complex".into(),
        complex.dimension.to_string(),
        complex.closure_length.to_string(),
    ]);
    Ok(Computed::new(json!({
        "real_dim": real.dimension,
        "complex_dim": complex.dimension,
        "closure_length": {"real": real.closure_length, "complex": complex.closure_length},
    }))
    .table(table))
}

pub fn clifford_identities(p: &Value, seed: u64, tol: Option<f64>) -> Result<Computed> {
    let sp: SampleParams = params(p)?;
    let tol = tol.unwrap_or(1e-12);
    let mut c = Checks::new();
    for chk in identity_checks()? {
        c.record(&chk.name, chk.residual, None, chk.pass);
    }
    let lr = left_right_equality()?;
    c.push(
        "span(L) = span(R)",
        if lr.equal {
            0.0
        } else {
            (lr.union_rank as f64 - lr.left_dim as f64).abs().max(1.0)
        },
        0.0,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut quad = 0.0f64;
    for _ in 0..sp.samples {
        let x = gaussian_octonion(&mut rng);
        let y = gaussian_octonion(&mut rng);
        let r = quadratic_relation_check(&x, &y);
        quad = quad.max(r.residual / (x.norm() * y.norm()));
    }
    c.push("quadratic relation", quad, tol);
    Ok(
        Computed::new(
            json!({"checks": c.rows, "left_right": to_value(&lr), "samples": sp.samples}),
        )
        .table(c.table)
        .tol("quadratic_relation", tol)
        .passed(c.all),
    )
}

pub fn ideals_states(p: &Value) -> Result<Computed> {
    let _: Empty = params(p)?;
    let mut table = Table::new(&["label", "ideal", "grade", "charge"]);
    let mut rows = Vec::new();
    let mut ranks = serde_json::Map::new();
    for which in [Ideal::U, Ideal::D] {
        let states = ideal_basis(which);
        ranks.insert(which.name().to_string(), json!(state_rank(&states)));
        for ch in charges(&states)? {
            table.push(vec![
                ch.label.to_string(),
                ch.ideal.name().to_string(),
                ch.grade.to_string(),
                ch.rational.clone(),
            ]);
            rows.push(to_value(&ch));
        }
    }
    Ok(Computed::new(json!({"states": rows, "rank": ranks})).table(table))
}

pub fn ideals_su3(p: &Value, tol: Option<f64>) -> Result<Computed> {
    let _: Empty = params(p)?;
    let tol = tol.unwrap_or(1e-10);
    let g = su3_generators();
    let sc = structure_constants(&g)?;
    let mut table = Table::new(&["a", "b", "c", "f"]);
    let mut nonzero = Vec::new();
    for a in 0..8 {
        for b in (a + 1)..8 {
            for cc in (b + 1)..8 {
                let f = sc.f[a][b][cc];
                if f.abs() > tol {
                    table.push(vec![
                        (a + 1).to_string(),
                        (b + 1).to_string(),
                        (cc + 1).to_string(),
                        fmt_f64(f),
                    ]);
                    nonzero.push(json!({"a": a + 1, "b": b + 1, "c": cc + 1, "f": f}));
                }
            }
        }
    }
    let w = witt_basis();
    let anti = w.anticommutators();
    let id = idempotents();
    let idem = |m: &End8| (m * m).max_abs_diff(m);
    let idempotent_residual = idem(&id.up).max(idem(&id.down));
    let preservation = witt_preservation_residual(&[0.3, 1.1, 2.5])?;
    let residuals = [
        sc.expansion_residual,
        sc.antisymmetry_residual,
        sc.jacobi_residual,
        sc.imaginary_part,
        anti.max(),
        idempotent_residual,
        preservation,
    ];
    let passed = residuals.iter().all(|&r| r <= tol);
    Ok(Computed::new(json!({
        "structure_constants": nonzero,
        "expansion_residual": sc.expansion_residual,
        "antisymmetry_residual": sc.antisymmetry_residual,
        "jacobi_residual": sc.jacobi_residual,
        "imaginary_part": sc.imaginary_part,
        "witt_anticommutators": to_value(&anti),
        "idempotent_residual": idempotent_residual,
        "witt_preservation_residual": preservation,
    }))
    .table(table)
    .tol("residual", tol)
    .passed(passed))
}

pub fn ideals_casimir(p: &Value, tol: Option<f64>) -> Result<Computed> {
    let _: Empty = params(p)?;
    let tol = tol.unwrap_or(1e-10);
    let g = su3_generators();
    let mut table = Table::new(&["ideal", "grade", "labels", "casimir", "irrep"]);
    let mut reports = Vec::new();
    let mut passed = true;
    for which in [Ideal::U, Ideal::D] {
        let rep = classify_representation(&g, &ideal_basis(which))?;
        passed &= rep.off_block <= tol;
        for b in &rep.blocks {
            passed &= b.casimir_spread <= tol;
            table.push(vec![
                which.name().to_string(),
                b.grade.to_string(),
                b.labels.join(" "),
                fmt_f64(b.casimir),
                b.irrep.clone(),
            ]);
        }
        reports.push(to_value(&rep));
    }
    Ok(Computed::new(json!({"ideals": reports}))
        .table(table)
        .tol("residual", tol)
        .passed(passed))
}
