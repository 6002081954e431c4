use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use super::{fmt_f64, params, to_value, Computed, Table};
use crate::cfs::point::{hermitian_eigen, signature_counts, zero_threshold};
use crate::cfs::{causal_class, lagrangian, product_spectrum};
use crate::gamma::max_abs;
use crate::majorana::{
    factorization_defect, gamma_majorana, momentum_residual, p_m_kernel, reality_check, Variant,
};
use crate::mult_algebra::{chain, unit_matrix, Side};
use crate::potentials::{
    one_loop_potential, one_loop_vacuum, tree_stationary_points, LoopParams, TreeParams,
};
use crate::vacuum::container::{write_kernels, ContainerHeader};
use crate::vacuum::lattice::Dims;
use crate::vacuum::residual::convergence;
use crate::vacuum::sectors::SECTOR_LABELS;
use crate::vacuum::{
    build_vacuum_aux, build_vacuum_direct, chiral_asymmetry, dirac_residual, left_algebra_action,
    local_correlation, local_correlation_octonionic, mass_matrix, to_direct, to_octonionic,
    LatticeSpec, MassData, Occupation, OctonionKernel, SectorKernel, VacuumOptions,
};
use crate::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BuildParams {
    lattice: LatticeSpec,
    masses: MassData,
    #[serde(default)]
    options: VacuumOptions,
}

fn charged_spread(sectors: &[SectorKernel]) -> f64 {
    sectors[2..]
        .iter()
        .map(|s| s.max_abs_diff(&sectors[1]))
        .fold(0.0, f64::max)
}

pub fn vacuum_build(p: &Value) -> Result<Computed> {
    let bp: BuildParams = params(p)?;
    let sectors = build_vacuum_direct(&bp.masses, &bp.lattice, &bp.options)?;
    let header = ContainerHeader::new(bp.lattice, bp.masses.clone(), &sectors);
    let mut bytes = Vec::new();
    write_kernels(&mut bytes, &header, &sectors)?;
    let mut table = Table::new(&["sector", "modes", "max_abs", "gamma0_symmetry_residual"]);
    let mut rows = Vec::new();
    for (label, s) in SECTOR_LABELS.iter().zip(&sectors) {
        let sym = s.gamma0_symmetry_residual();
        table.push(vec![
            label.to_string(),
            s.modes.len().to_string(),
            fmt_f64(s.max_abs()),
            fmt_f64(sym),
        ]);
        rows.push(json!({"sector": label, "modes": s.modes.len(), "max_abs": s.max_abs(), "gamma0_symmetry_residual": sym}));
    }
    let mut out = Computed::new(json!({
        "sectors": rows,
        "charged_sector_spread": charged_spread(&sectors),
        "neutrino_charged_distance": sectors[0].max_abs_diff(&sectors[1]),
        "container_bytes": bytes.len(),
        "header": to_value(&header),
    }))
    .table(table);
    out.binary = Some(bytes);
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ResidualParams {
    lattice: LatticeSpec,
    masses: MassData,
    /// Also measure the residual on the refined lattice.
    #[serde(default)]
    refine: bool,
}

pub fn vacuum_residual(p: &Value, tol: Option<f64>) -> Result<Computed> {
    let rp: ResidualParams = params(p)?;
    let tol = tol.unwrap_or(1e-12);
    let aux = build_vacuum_aux(&rp.masses, &rp.lattice)?;
    let res = dirac_residual(&aux);
    let asym = chiral_asymmetry(rp.masses.tau_reg)?;
    let mass = mass_matrix(&rp.masses)?;
    let commutator = asym.compose(&mass).max_abs_diff(&mass.compose(&asym));
    let conv = if rp.refine {
        Some(to_value(&convergence(&rp.masses, &rp.lattice)?))
    } else {
        None
    };
    let mut table = Table::new(&["sector", "generation", "mass", "lattice", "momentum"]);
    for s in &res.summands {
        table.push(vec![
            SECTOR_LABELS[s.sector].to_string(),
            s.generation.to_string(),
            fmt_f64(s.mass),
            fmt_f64(s.lattice),
            fmt_f64(s.momentum),
        ]);
    }
    Ok(Computed::new(json!({
        "residual": to_value(&res),
        "mass_asymmetry_commutator": commutator,
        "convergence": conv,
    }))
    .table(table)
    .tol("momentum", tol)
    .passed(res.momentum_max <= tol))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LocalizeParams {
    lattice: LatticeSpec,
    masses: MassData,
    #[serde(default)]
    options: VacuumOptions,
    point: Vec<i64>,
    #[serde(default)]
    other: Option<Vec<i64>>,
    #[serde(default = "unit")]
    kappa: f64,
    #[serde(default = "sea")]
    occupation: Occupation,
}

fn unit() -> f64 {
    1.0
}

fn sea() -> Occupation {
    Occupation::Sea
}

/// Pads `(t, x)` to four coordinates for 1+1 lattices.
fn spacetime_point(coords: &[i64], dims: Dims) -> Result<[i64; 4]> {
    let need = 1 + dims.spatial();
    if coords.len() != need && coords.len() != 4 {
        return Err(Error::Config(format!(
            "point needs {need} coordinates, got {}",
            coords.len()
        )));
    }
    let mut out = [0i64; 4];
    out[..coords.len()].copy_from_slice(coords);
    Ok(out)
}

fn sorted_eigenvalues(m: &crate::cfs::CMatrix) -> Vec<f64> {
    let (mut e, _) = hermitian_eigen(m);
    e.sort_by(f64::total_cmp);
    e
}

pub fn vacuum_localize(p: &Value) -> Result<Computed> {
    let lp: LocalizeParams = params(p)?;
    let dims = lp.lattice.dims;
    let x = spacetime_point(&lp.point, dims)?;
    let sectors = build_vacuum_direct(&lp.masses, &lp.lattice, &lp.options)?;
    let ok = to_octonionic(&sectors)?;
    let (fx, cfg) = local_correlation(&sectors, x, lp.kappa, lp.occupation)?;
    let (fo, _) = local_correlation_octonionic(&ok, x, lp.kappa, lp.occupation)?;
    let eigs = sorted_eigenvalues(fx.matrix());
    let eigs_oct = sorted_eigenvalues(fo.matrix());
    let agreement = eigs
        .iter()
        .zip(&eigs_oct)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let (pos, neg) = signature_counts(&eigs, zero_threshold(&eigs));
    let mut table = Table::new(&["index", "eigenvalue"]);
    for (i, l) in eigs.iter().enumerate() {
        table.push(vec![i.to_string(), fmt_f64(*l)]);
    }
    let pair = match &lp.other {
        Some(o) => {
            let y = spacetime_point(o, dims)?;
            let (fy, _) = local_correlation(&sectors, y, lp.kappa, lp.occupation)?;
            let spec = product_spectrum(&fx, &fy, &cfg)?;
            json!({
                "point": y,
                "class": causal_class(&fx, &fy, &cfg)?,
                "spectrum": spec.values().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "lagrangian": lagrangian(&fx, &fy, &cfg)?,
            })
        }
        None => Value::Null,
    };
    Ok(Computed::new(json!({
        "point": x,
        "system": to_value(&cfg),
        "trace": fx.trace(),
        "eigenvalues": eigs,
        "signature": {"p": pos, "q": neg},
        "octonionic_agreement": agreement,
        "pair": pair,
    }))
    .table(table))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ActParams {
    lattice: LatticeSpec,
    masses: MassData,
    #[serde(default)]
    options: VacuumOptions,
    /// Imaginary units `i` of the word `L_{e_i1} ... L_{e_ik}`.
    op: Vec<usize>,
}

fn kernel_distance(a: &OctonionKernel, b: &OctonionKernel) -> f64 {
    (0..8)
        .map(|i| a.coefficient(i).max_abs_diff(b.coefficient(i)))
        .fold(0.0, f64::max)
}

pub fn vacuum_act(p: &Value) -> Result<Computed> {
    let ap: ActParams = params(p)?;
    if ap.op.is_empty() {
        return Err(Error::Config("op needs at least one unit".into()));
    }
    let op = chain(&ap.op, Side::Left)?;
    let sectors = build_vacuum_direct(&ap.masses, &ap.lattice, &ap.options)?;
    let ok = to_octonionic(&sectors)?;
    let acted = left_algebra_action(&op, &ok);
    let mut sequential = ok.clone();
    for &i in ap.op.iter().rev() {
        sequential = left_algebra_action(&unit_matrix(i, Side::Left), &sequential);
    }
    let composition = kernel_distance(&acted, &sequential);
    let mut table = Table::new(&["coefficient", "before", "after"]);
    let mut rows = Vec::new();
    for i in 0..8 {
        let (b, a) = (ok.coefficient(i).max_abs(), acted.coefficient(i).max_abs());
        table.push(vec![format!("e{i}"), fmt_f64(b), fmt_f64(a)]);
        rows.push(json!({"coefficient": i, "before": b, "after": a}));
    }
    let mut entries = Vec::new();
    for r in 0..8 {
        for c in 0..8 {
            let z = op.matrix[(r, c)];
            if z.norm() > 0.0 {
                entries.push(json!([r, c, z.re, z.im]));
            }
        }
    }
    let direct = to_direct(&acted);
    Ok(Computed::new(json!({
        "op": ap.op,
        "op_entries": entries,
        "coefficients": rows,
        "composition_residual": composition,
        "charged_spread_after": charged_spread(&direct),
    }))
    .table(table))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct MajoranaParams {
    m: f64,
    n: f64,
    samples: usize,
    variant: Option<Variant>,
    lattice: LatticeSpec,
}

impl Default for MajoranaParams {
    fn default() -> Self {
        MajoranaParams {
            m: 0.5,
            n: 0.4,
            samples: 1000,
            variant: None,
            lattice: LatticeSpec {
                l: 8,
                t: 4,
                a: 0.25,
                epsilon: 0.5,
                dims: Dims::D1p3,
            },
        }
    }
}

pub fn majorana_check(p: &Value, seed: u64, tol: Option<f64>) -> Result<Computed> {
    let mp: MajoranaParams = params(p)?;
    let tol = tol.unwrap_or(1e-12);
    let g = gamma_majorana();
    let clifford = g.clifford_residual();
    let gamma5 = g.gamma5_residual();
    let reality = reality_check(mp.m, mp.n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut derived, mut printed, mut printed_shell) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..mp.samples {
        let k: [f64; 4] = std::array::from_fn(|_| rng.random_range(-3.0..3.0));
        derived = derived.max(factorization_defect(k, mp.m, mp.n, Variant::Derived));
        printed = printed.max(factorization_defect(k, mp.m, mp.n, Variant::Printed));
        let spatial = k[1] * k[1] + k[2] * k[2] + k[3] * k[3];
        let omega = (spatial + mp.m * mp.m + mp.n * mp.n).sqrt();
        let shell = [omega, k[1], k[2], k[3]];
        printed_shell = printed_shell.max(max_abs(&momentum_residual(
            shell,
            mp.m,
            mp.n,
            Variant::Printed,
        )));
    }
    let variants = match mp.variant {
        Some(v) => vec![v],
        None => vec![Variant::Derived, Variant::Printed],
    };
    let mut table = Table::new(&["quantity", "value"]);
    let mut kernels = Vec::new();
    for v in variants {
        let (_, r) = p_m_kernel(&mp.lattice, mp.m, mp.n, v)?;
        let name = match v {
            Variant::Derived => "derived",
            Variant::Printed => "printed",
        };
        table.push(vec![
            format!("{name} kernel momentum residual"),
            fmt_f64(r.momentum),
        ]);
        table.push(vec![
            format!("{name} kernel lattice residual"),
            fmt_f64(r.lattice),
        ]);
        table.push(vec![
            format!("{name} kernel max imag"),
            fmt_f64(r.kernel_max_imag),
        ]);
        kernels.push(to_value(&r));
    }
    table.push(vec!["clifford residual".into(), fmt_f64(clifford)]);
    table.push(vec!["gamma5 residual".into(), fmt_f64(gamma5)]);
    table.push(vec![
        "maps real to real".into(),
        reality.maps_real_to_real.to_string(),
    ]);
    table.push(vec![
        "derived factorization defect".into(),
        fmt_f64(derived),
    ]);
    table.push(vec![
        "printed factorization defect".into(),
        fmt_f64(printed),
    ]);
    table.push(vec![
        "printed on-shell residual".into(),
        fmt_f64(printed_shell),
    ]);
    let passed = clifford == 0.0 && gamma5 == 0.0 && reality.maps_real_to_real && derived <= tol;
    Ok(Computed::new(json!({
        "clifford_residual": clifford,
        "gamma5_residual": gamma5,
        "reality": to_value(&reality),
        "derived_factorization_defect": derived,
        "printed_factorization_defect": printed,
        "printed_on_shell_residual": printed_shell,
        "kernels": kernels,
        "samples": mp.samples,
    }))
    .table(table)
    .tol("derived_factorization", tol)
    .tol("clifford", 0.0)
    .passed(passed))
}

#[derive(Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
enum ScanParams {
    Tree {
        mu2: f64,
        lambda1: f64,
        lambda2: f64,
    },
    Loop {
        lambda1: f64,
        lambda2: f64,
        g: f64,
        m_scale: f64,
        /// Scan over these `lambda2` values instead of the single one.
        #[serde(default)]
        lambda2_values: Vec<f64>,
    },
}

pub fn potentials_scan(p: &Value) -> Result<Computed> {
    match params::<ScanParams>(p)? {
        ScanParams::Tree {
            mu2,
            lambda1,
            lambda2,
        } => {
            let a = tree_stationary_points(&TreeParams::new(mu2, lambda1, lambda2)?)?;
            let mut table = Table::new(&["label", "s_l", "s_r", "value", "kind"]);
            for pt in &a.points {
                table.push(vec![
                    pt.label.to_string(),
                    fmt_f64(pt.s_l),
                    fmt_f64(pt.s_r),
                    fmt_f64(pt.value),
                    to_value(&pt.kind).as_str().unwrap_or_default().to_string(),
                ]);
            }
            Ok(Computed::new(to_value(&a)).table(table))
        }
        ScanParams::Loop {
            lambda1,
            lambda2,
            g,
            m_scale,
            lambda2_values,
        } => {
            let values = if lambda2_values.is_empty() {
                vec![lambda2]
            } else {
                lambda2_values
            };
            let mut table = Table::new(&[
                "lambda2",
                "v_r2",
                "symmetric_s",
                "value_asymmetric",
                "value_symmetric",
                "asymmetric_is_lower",
                "printed_condition_holds",
                "printed_condition_agrees",
                "fd_radial_gradient",
            ]);
            let mut rows = Vec::new();
            for l2 in values {
                let lp = LoopParams {
                    lambda1,
                    lambda2: l2,
                    g,
                    m_scale,
                };
                let v = one_loop_vacuum(&lp)?;
                let h = 1e-6 * v.v_r2;
                let fd = (one_loop_potential(0.0, v.v_r2 + h, &lp)?
                    - one_loop_potential(0.0, v.v_r2 - h, &lp)?)
                    / (2.0 * h);
                table.push(vec![
                    fmt_f64(l2),
                    fmt_f64(v.v_r2),
                    fmt_f64(v.symmetric_s),
                    fmt_f64(v.value_asymmetric),
                    fmt_f64(v.value_symmetric),
                    v.asymmetric_is_lower.to_string(),
                    v.printed_condition_holds.to_string(),
                    v.printed_condition_agrees.to_string(),
                    fmt_f64(fd),
                ]);
                let mut row = to_value(&v);
                row["fd_radial_gradient"] = json!(fd);
                rows.push(row);
            }
            Ok(Computed::new(json!({"scan": rows})).table(table))
        }
    }
}
