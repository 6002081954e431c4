//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Runs without the libtest harness.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use octo_cfs::cfs::point::{diag, real_matrix, CMatrix};
use octo_cfs::cfs::random::random_point;
use octo_cfs::cfs::{
    action, causal_class, closed_chain_deviation, completeness_check, constraints, lagrangian,
    lagrangian_first_term, minimize, product_spectrum, spin_space, validate_point, AffineFamily,
    CausalClass, MinimizeOptions, SystemConfig,
};
use octo_cfs::gamma::GammaSet;
use octo_cfs::majorana::{
    factorization_defect, gamma_majorana, momentum_residual, reality_check, Variant,
};
use octo_cfs::mult_algebra::{
    chain, imaginary_generators, left_right_equality, span_dimension, unit_matrix, End8, Field,
    Side,
};
use octo_cfs::octonion::{Octonion, FANO_LINES};
use octo_cfs::potentials::{
    one_loop_potential, one_loop_vacuum, tree_potential, tree_stationary_points, LoopParams,
    PointKind, TreeParams,
};
use octo_cfs::vacuum::residual::convergence;
use octo_cfs::vacuum::{
    build_vacuum_aux, build_vacuum_direct, dirac_residual, local_correlation,
    local_correlation_octonionic, to_direct, to_octonionic, Dims, LatticeSpec, MassData,
    Occupation, VacuumOptions,
};
use octo_cfs::witt::{
    charges, classify_representation, ideal_basis, idempotents, state_rank, su3_generators,
    witt_basis, Ideal,
};

/// Outcome of one criterion: failures carry a short reason.
type Check = Result<String, String>;

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn e(i: usize) -> Octonion {
    Octonion::basis(i)
}

fn octonion_identities() -> Check {
    for [i, j, k] in FANO_LINES {
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            ensure(e(a).product(&e(b)) == e(c), format!("e{a} e{b} != e{c}"))?;
            ensure(
                e(b).product(&e(a)) == e(c).scale(-1.0),
                format!("e{b} e{a} != -e{c}"),
            )?;
        }
    }
    ensure(
        e(4).product(&e(7).product(&e(6))) == e(5).scale(-1.0),
        "e4(e7e6) != -e5",
    )?;
    ensure(e(4).product(&e(7)).product(&e(6)) == e(5), "(e4e7)e6 != e5")?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let a = Octonion::new(std::array::from_fn(|_| StandardNormal.sample(&mut rng)));
        let b = Octonion::new(std::array::from_fn(|_| StandardNormal.sample(&mut rng)));
        let s = a.norm() * b.norm();
        worst = worst.max((a.product(&b).norm() - s).abs() / s);
    }
    ensure(worst <= 1e-12, format!("norm multiplicativity {worst:.2e}"))?;
    Ok(format!("max relative norm defect {worst:.2e}"))
}

fn multiplication_algebra() -> Check {
    let real = span_dimension(&imaginary_generators(Side::Left), Field::Real)
        .map_err(|e| e.to_string())?;
    let complexified: Vec<End8> = imaginary_generators(Side::Left)
        .into_iter()
        .map(|g| End8::new(g.matrix, Field::Complex))
        .collect();
    let complex = span_dimension(&complexified, Field::Complex).map_err(|e| e.to_string())?;
    ensure(
        real.dimension == 64,
        format!("real span {}", real.dimension),
    )?;
    ensure(
        complex.dimension == 64,
        format!("complex span {}", complex.dimension),
    )?;
    let c = chain(&[1, 2, 3, 4, 5, 6], Side::Left).map_err(|e| e.to_string())?;
    ensure(
        c.matrix == unit_matrix(7, Side::Left).matrix,
        "L1..L6 != L7",
    )?;
    let lr = left_right_equality().map_err(|e| e.to_string())?;
    ensure(
        lr.equal,
        format!(
            "left {} right {} union {}",
            lr.left_dim, lr.right_dim, lr.union_rank
        ),
    )?;
    Ok(format!(
        "real {} complex {} union {}",
        real.dimension, complex.dimension, lr.union_rank
    ))
}

fn witt_ideals() -> Check {
    let w = witt_basis();
    let anti = w.anticommutators().max();
    ensure(anti <= 1e-12, format!("anticommutators {anti:.2e}"))?;
    let id = idempotents();
    let idem = (&id.up * &id.up).max_abs_diff(&id.up);
    ensure(
        idem <= 1e-12,
        format!("omega omega^dagger idempotent defect {idem:.2e}"),
    )?;
    let g = su3_generators();
    let mut summary = Vec::new();
    for (which, expected) in [(Ideal::U, "1+3bar+3+1"), (Ideal::D, "1+3+3bar+1")] {
        let states = ideal_basis(which);
        let rank = state_rank(&states);
        ensure(rank == 8, format!("{} rank {rank}", which.name()))?;
        let rep = classify_representation(&g, &states).map_err(|e| e.to_string())?;
        ensure(
            rep.decomposition == expected,
            format!("{} decomposes as {}", which.name(), rep.decomposition),
        )?;
        let sizes: Vec<usize> = rep.blocks.iter().map(|b| b.labels.len()).collect();
        ensure(sizes == [1, 3, 3, 1], format!("block sizes {sizes:?}"))?;
        summary.push(rep.decomposition);
    }
    let ch = charges(&ideal_basis(Ideal::U)).map_err(|e| e.to_string())?;
    let mut got: Vec<String> = ch.iter().map(|c| c.rational.clone()).collect();
    got.sort();
    let mut want: Vec<String> = ["0", "1/3", "1/3", "1/3", "2/3", "2/3", "2/3", "1"]
        .map(String::from)
        .to_vec();
    want.sort();
    ensure(got == want, format!("charges {got:?}"))?;
    let exact = ch
        .iter()
        .map(|c| (3.0 * c.value - (3.0 * c.value).round()).abs())
        .fold(0.0, f64::max);
    ensure(exact <= 1e-12, format!("charges off thirds by {exact:.2e}"))?;
    Ok(format!(
        "{} / {}, anticommutators {anti:.1e}",
        summary[0], summary[1]
    ))
}

fn cfs_kernel_identities() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut chain_worst, mut complete_worst) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let f = rng.random_range(2..=12usize);
        let n = rng.random_range(1..=3usize).min(f);
        let cfg = SystemConfig::new(f, n, 0.5, 0.0).unwrap();
        let x = random_point(&mut rng, &cfg);
        let y = random_point(&mut rng, &cfg);
        chain_worst =
            chain_worst.max(closed_chain_deviation(&x, &y, &cfg).map_err(|e| e.to_string())?);
        let phi = nalgebra::DVector::from_fn(f, |_, _| {
            Complex64::new(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            )
        });
        complete_worst =
            complete_worst.max(completeness_check(&spin_space(&x), &spin_space(&y), &phi));
    }
    ensure(
        complete_worst < 1e-10,
        format!("kernel residual {complete_worst:.2e}"),
    )?;
    ensure(
        chain_worst <= 1e-8,
        format!("closed chain mismatch {chain_worst:.2e}"),
    )?;
    Ok(format!(
        "kernel residual {complete_worst:.1e}, spectrum mismatch {chain_worst:.1e}"
    ))
}

fn causal_classification() -> Check {
    let c2 = SystemConfig::new(2, 1, 1.0, 0.0).unwrap();
    let pt = |m: CMatrix, c: &SystemConfig| validate_point(m, c).unwrap();
    let x = pt(diag(&[1.0, -1.0]), &c2);
    let x2 = pt(diag(&[2.0, -1.0]), &c2);
    let c4 = SystemConfig::new(4, 2, 1.0, 0.0).unwrap();
    let lx = pt(diag(&[1.0, -1.0, 0.0, 0.0]), &c4);
    let ly = pt(
        real_matrix(&[
            vec![0.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0; 4],
            vec![0.0; 4],
        ]),
        &c4,
    );
    let classes = [
        causal_class(&x, &x, &c2),
        causal_class(&x2, &x, &c2),
        causal_class(&lx, &ly, &c4),
    ]
    .map(|r| r.map_err(|e| e.to_string()));
    let expected = [
        CausalClass::Spacelike,
        CausalClass::Timelike,
        CausalClass::Lightlike,
    ];
    for (got, want) in classes.into_iter().zip(expected) {
        let got = got?;
        ensure(
            got == want,
            format!("worked example gave {got}, expected {want}"),
        )?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut spacelike, mut worst) = (0usize, 0.0f64);
    for _ in 0..500 {
        let f = rng.random_range(2..=8usize);
        let n = rng.random_range(1..=3usize).min(f);
        let cfg = SystemConfig::new(f, n, 0.5, 0.0).unwrap();
        let x = random_point(&mut rng, &cfg);
        let y = random_point(&mut rng, &cfg);
        let spec = product_spectrum(&x, &y, &cfg).map_err(|e| e.to_string())?;
        if octo_cfs::cfs::spectrum::classify_spectrum(&spec) == CausalClass::Spacelike {
            spacelike += 1;
            worst = worst.max(lagrangian_first_term(&spec).abs());
        }
    }
    ensure(
        worst < 1e-12,
        format!("first term {worst:.2e} on a spacelike pair"),
    )?;
    Ok(format!(
        "{spacelike}/500 spacelike, max first term {worst:.1e}"
    ))
}

/// Action of the two-point diagonal family at weight `w` and first parameter `a`,
/// the second fixed by the trace constraint.
fn toy_action(w: f64, a: f64, cfg: &SystemConfig) -> Option<f64> {
    let c = (1.0 - w * a) / (1.0 - w);
    if !(a >= 0.0 && c >= 0.0) {
        return None;
    }
    let xa = validate_point(diag(&[a, 0.0]), cfg).ok()?;
    let xc = validate_point(diag(&[0.0, c]), cfg).ok()?;
    let laa = lagrangian(&xa, &xa, cfg).ok()?;
    let lcc = lagrangian(&xc, &xc, cfg).ok()?;
    let lac = lagrangian(&xa, &xc, cfg).ok()?;
    Some(w * w * laa + (1.0 - w) * (1.0 - w) * lcc + 2.0 * w * (1.0 - w) * lac)
}

/// Brute-force grid over `(w, a)`, zooming in on the best cell.
fn grid_oracle(cfg: &SystemConfig) -> f64 {
    let (mut w_lo, mut w_hi, mut a_lo, mut a_hi) = (0.01, 0.99, 0.0, 4.0);
    let mut best = (f64::INFINITY, 0.5, 1.0);
    let steps = 200;
    for _ in 0..8 {
        for i in 0..=steps {
            let w = w_lo + (w_hi - w_lo) * i as f64 / steps as f64;
            for j in 0..=steps {
                let a = a_lo + (a_hi - a_lo) * j as f64 / steps as f64;
                if let Some(s) = toy_action(w, a, cfg) {
                    if s < best.0 {
                        best = (s, w, a);
                    }
                }
            }
        }
        let (dw, da) = (
            4.0 * (w_hi - w_lo) / steps as f64,
            4.0 * (a_hi - a_lo) / steps as f64,
        );
        w_lo = (best.1 - dw).max(0.01);
        w_hi = (best.1 + dw).min(0.99);
        a_lo = (best.2 - da).max(0.0);
        a_hi = best.2 + da;
    }
    best.0
}

fn minimizer() -> Check {
    let cfg = SystemConfig::new(2, 1, 0.25, 0.0).unwrap();
    let family = AffineFamily::diagonal_pair(0.8, 1.3);
    let (measure, report) =
        minimize(&family, &cfg, &MinimizeOptions::default()).map_err(|e| e.to_string())?;
    let oracle = grid_oracle(&cfg);
    let gap = (report.action - oracle).abs();
    ensure(
        gap <= 1e-6,
        format!("action {} vs grid {oracle}", report.action),
    )?;
    let recomputed = action(&measure, &cfg).map_err(|e| e.to_string())?;
    ensure(
        (recomputed - report.action).abs() <= 1e-12,
        "reported action differs from recomputed",
    )?;
    let (volume, trace) = constraints(&measure);
    ensure(
        (volume - 1.0).abs() <= 1e-8 && (trace - 1.0).abs() <= 1e-8,
        format!("constraints {volume} {trace}"),
    )?;
    let spread = report.euler_lagrange.ell_spread;
    ensure(
        spread < 1e-5 * (1.0 + report.action.abs()),
        format!("EL spread {spread:.2e}"),
    )?;
    Ok(format!(
        "action {:.9} grid {oracle:.9}, EL spread {spread:.1e}",
        report.action
    ))
}

fn vacuum_lattice() -> Check {
    let md = MassData {
        charged_masses: [0.8, 1.3, 2.0],
        neutrino_masses: [0.0, 0.6, 0.9],
        tau_reg: 0.5,
        m: 1.0,
    };
    let lat = LatticeSpec::new(16, 16, 0.1, 1.0, Dims::D1p1).map_err(|e| e.to_string())?;
    let aux = build_vacuum_aux(&md, &lat).map_err(|e| e.to_string())?;
    let res = dirac_residual(&aux);
    ensure(
        res.momentum_max <= 1e-12,
        format!("on-shell factorization {:.2e}", res.momentum_max),
    )?;
    let conv = convergence(&md, &lat).map_err(|e| e.to_string())?;
    ensure(
        (1.8..=2.2).contains(&conv.order),
        format!("convergence order {:.3}", conv.order),
    )?;

    let direct =
        build_vacuum_direct(&md, &lat, &VacuumOptions::default()).map_err(|e| e.to_string())?;
    let spread = direct[2..]
        .iter()
        .map(|s| s.max_abs_diff(&direct[1]))
        .fold(0.0, f64::max);
    ensure(
        spread == 0.0,
        format!("charged sectors differ by {spread:.2e}"),
    )?;

    let small = LatticeSpec::new(6, 3, 0.5, 0.5, Dims::D1p1).map_err(|e| e.to_string())?;
    let direct =
        build_vacuum_direct(&md, &small, &VacuumOptions::default()).map_err(|e| e.to_string())?;
    let oct = to_octonionic(&direct).map_err(|e| e.to_string())?;
    let back = to_direct(&oct);
    let round_trip = direct
        .iter()
        .zip(&back)
        .map(|(a, b)| a.max_abs_diff(b))
        .fold(0.0, f64::max);
    let (x, y) = ([0, 0, 0, 0], [1, 2, 0, 0]);
    let (fd, cfg) =
        local_correlation(&direct, x, 1.0, Occupation::Sea).map_err(|e| e.to_string())?;
    let (gd, _) = local_correlation(&direct, y, 1.0, Occupation::Sea).map_err(|e| e.to_string())?;
    let (fo, _) =
        local_correlation_octonionic(&oct, x, 1.0, Occupation::Sea).map_err(|e| e.to_string())?;
    let (go, _) =
        local_correlation_octonionic(&oct, y, 1.0, Occupation::Sea).map_err(|e| e.to_string())?;
    let scalars = |f: &octo_cfs::cfs::OperatorPoint,
                   g: &octo_cfs::cfs::OperatorPoint|
     -> Result<[f64; 3], String> {
        Ok([
            f.trace(),
            g.trace(),
            lagrangian(f, g, &cfg).map_err(|e| e.to_string())?,
        ])
    };
    let a = scalars(&fd, &gd)?;
    let b = scalars(&fo, &go)?;
    let agree = a
        .iter()
        .zip(&b)
        .map(|(p, q)| (p - q).abs())
        .fold(round_trip, f64::max);
    ensure(
        agree <= 1e-12,
        format!("representations differ by {agree:.2e}"),
    )?;
    Ok(format!(
        "order {:.3} ({:.2e} -> {:.2e}), representations agree to {agree:.1e}",
        conv.order, conv.coarse_residual, conv.fine_residual
    ))
}

fn majorana_suite() -> Check {
    let g = gamma_majorana();
    ensure(
        g.clifford_residual() == 0.0 && g.gamma5_residual() == 0.0,
        "Clifford relations not exact",
    )?;
    ensure(
        GammaSet::dirac().clifford_residual() == 0.0,
        "Dirac representation not exact",
    )?;
    let r = reality_check(0.5, 0.4);
    ensure(
        r.maps_real_to_real && r.majorana_max_imag == [0.0; 5],
        "reality fails",
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut derived, mut printed) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let k: [f64; 4] = std::array::from_fn(|_| rng.random_range(-3.0..3.0));
        let (m, n) = (rng.random_range(0.0..2.0), rng.random_range(-2.0..2.0));
        derived = derived.max(factorization_defect(k, m, n, Variant::Derived));
        let omega = (k[1] * k[1] + k[2] * k[2] + k[3] * k[3] + m * m + n * n).sqrt();
        let shell = [omega, k[1], k[2], k[3]];
        printed = printed.max(octo_cfs::gamma::max_abs(&momentum_residual(
            shell,
            m,
            n,
            Variant::Printed,
        )));
    }
    ensure(
        derived <= 1e-12,
        format!("derived factorization {derived:.2e}"),
    )?;
    Ok(format!(
        "derived defect {derived:.1e}; printed on-shell residual (reported) {printed:.3}"
    ))
}

fn chiral_potentials() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let mu2 = rng.random_range(0.1..3.0);
        let lambda1 = rng.random_range(0.1..2.0);
        let lambda2 = 2.0 * lambda1 + rng.random_range(0.05..3.0);
        let p = TreeParams::new(mu2, lambda1, lambda2).map_err(|e| e.to_string())?;
        let analysis = tree_stationary_points(&p).map_err(|e| e.to_string())?;
        let u2 = mu2 / (2.0 * lambda1);
        let asym = analysis
            .points
            .iter()
            .find(|q| q.label == "asymmetric_r")
            .ok_or("no asymmetric point")?;
        ensure(
            asym.kind == PointKind::Minimum,
            "asymmetric point is not a minimum",
        )?;
        ensure(
            (asym.s_r - u2).abs() <= 1e-12 * u2,
            "asymmetric point off the closed form",
        )?;
        // 400 x 400 grid over [0, 2 u^2]^2.
        let (n, top) = (400usize, 2.0 * u2);
        let h = top / (n - 1) as f64;
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let (sl, sr) = (i as f64 * h, j as f64 * h);
                let v = tree_potential(sl, sr, &p).map_err(|e| e.to_string())?;
                if v < best.0 {
                    best = (v, sl, sr);
                }
            }
        }
        let located = best.1.min(best.2);
        let along = best.1.max(best.2);
        ensure(
            located <= 1e-15 && (along - u2).abs() <= h,
            format!("grid minimum at ({}, {})", best.1, best.2),
        )?;
        ensure(
            asym.value <= best.0 + 1e-12,
            "grid beats the closed-form minimum",
        )?;
        worst = worst.max((along - u2).abs() / h);
    }
    let lp = LoopParams {
        lambda1: 0.01,
        lambda2: 0.004,
        g: 1.0,
        m_scale: 1.0,
    };
    let vac = one_loop_vacuum(&lp).map_err(|e| e.to_string())?;
    let v = vac.v_r2;
    let step = 1e-5 * v;
    let fd = (one_loop_potential(0.0, v + step, &lp).map_err(|e| e.to_string())?
        - one_loop_potential(0.0, v - step, &lp).map_err(|e| e.to_string())?)
        / (2.0 * step);
    let c = lp.loop_coefficient();
    let scale = 2.0 * lp.lambda1 * v + c * v * ((v).ln().abs() + 25.0 / 3.0);
    ensure(
        fd.abs() < 1e-8 * scale,
        format!("one-loop radial gradient {fd:.2e} (scale {scale:.2e})"),
    )?;
    Ok(format!(
        "grid offsets <= {worst:.2} cells over 50 draws; one-loop gradient {:.1e} of scale",
        fd.abs() / scale
    ))
}

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_octo-cfs"))
        .args(args)
        .current_dir(configs_dir())
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?} exited with {}: {}",
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn reproducibility() -> Check {
    let commands: [&[&str]; 6] = [
        &["octonion", "check", "--seed", "17"],
        &["clifford", "identities", "--seed", "17", "--samples", "200"],
        &[
            "cfs",
            "classify",
            "--random",
            "25",
            "--seed",
            "17",
            "--params",
            r#"{"config":{"f":6,"n":2,"kappa":0.5}}"#,
        ],
        &[
            "cfs",
            "minimize",
            "--family",
            "toy_family.json",
            "--kappa",
            "0.25",
            "--seed",
            "17",
        ],
        &["majorana", "check", "--seed", "17", "--format", "csv"],
        &[
            "potentials",
            "scan",
            "--loop",
            "--params",
            "loop.json",
            "--format",
            "csv",
        ],
    ];
    for args in commands {
        let a = run_cli(args)?;
        let b = run_cli(args)?;
        ensure(
            !a.is_empty() && a == b,
            format!("{args:?} differs between runs"),
        )?;
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut blobs = Vec::new();
    for name in ["a.bin", "b.bin"] {
        let path = dir.path().join(name);
        let path = path.to_str().ok_or("temp path")?;
        run_cli(&[
            "vacuum",
            "build",
            "--params",
            "vacuum.json",
            "--seed",
            "17",
            "--out",
            path,
        ])?;
        blobs.push(std::fs::read(path).map_err(|e| e.to_string())?);
    }
    ensure(blobs[0] == blobs[1], "vacuum containers differ")?;
    Ok(format!("{} commands byte-identical", commands.len() + 1))
}

struct Criterion {
    number: usize,
    name: &'static str,
    budget: Duration,
    check: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion {
            number: 1,
            name: "octonion identities",
            budget: Duration::from_secs(1),
            check: octonion_identities,
        },
        Criterion {
            number: 2,
            name: "multiplication algebra",
            budget: Duration::from_secs(10),
            check: multiplication_algebra,
        },
        Criterion {
            number: 3,
            name: "witt basis and ideals",
            budget: Duration::from_secs(5),
            check: witt_ideals,
        },
        Criterion {
            number: 4,
            name: "cfs kernel identities",
            budget: Duration::from_secs(10),
            check: cfs_kernel_identities,
        },
        Criterion {
            number: 5,
            name: "causal classification",
            budget: Duration::from_secs(10),
            check: causal_classification,
        },
        Criterion {
            number: 6,
            name: "minimizer",
            budget: Duration::from_secs(60),
            check: minimizer,
        },
        Criterion {
            number: 7,
            name: "vacuum lattice",
            budget: Duration::from_secs(120),
            check: vacuum_lattice,
        },
        Criterion {
            number: 8,
            name: "majorana suite",
            budget: Duration::from_secs(1),
            check: majorana_suite,
        },
        Criterion {
            number: 9,
            name: "chiral potentials",
            budget: Duration::from_secs(30),
            check: chiral_potentials,
        },
        Criterion {
            number: 10,
            name: "reproducibility",
            budget: Duration::from_secs(60),
            check: reproducibility,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let verdict = match &outcome {
            Ok(_) if elapsed > c.budget => Err(format!(
                "took {:.2}s, budget {:.0}s",
                elapsed.as_secs_f64(),
                c.budget.as_secs_f64()
            )),
            other => other.clone(),
        };
        match verdict {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {:<24} {:>7.3}s  {detail}",
                c.number,
                c.name,
                elapsed.as_secs_f64()
            ),
            Err(reason) => {
                failed += 1;
                println!(
                    "criterion {:>2} FAIL  {:<24} {:>7.3}s  {reason}",
                    c.number,
                    c.name,
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
