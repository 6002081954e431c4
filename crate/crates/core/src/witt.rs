//! Witt basis of the complexified left multiplication algebra, the two
//! minimal left ideals it seeds, and the `SU(3) x U(1)` generators that
//! preserve them.
//!
//! Everything lives in `End8` (complex 8x8 matrices). Ideal states are
//! matrices `X P` with `P` a primitive idempotent; the algebra acts on
//! them by left multiplication.

use nalgebra::{DMatrix, DVector, Matrix3, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mult_algebra::{left_matrix, End8, Mat8};
use crate::octonion::ComplexOctonion;

/// Entrywise tolerance on Witt-basis and idempotent identities.
pub const WITT_TOL: f64 = 1e-12;
/// Residual tolerance for ideal membership and eigen-relations.
pub const IDEAL_TOL: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The complex octonion `(s*e_k + i*e_{k+4}) / 2` whose left multiplication
/// gives a Witt element.
fn witt_octonion(k: usize, s: f64) -> ComplexOctonion {
    let mut coeffs = [Complex64::new(0.0, 0.0); 8];
    coeffs[k] = c(0.5 * s);
    coeffs[k + 4] = Complex64::new(0.0, 0.5);
    ComplexOctonion::new(coeffs)
}

#[derive(Debug, Clone)]
pub struct WittBasis {
    /// `alpha_k = (-L_{e_k} + i L_{e_{k+4}}) / 2`
    pub alpha: [End8; 3],
    /// `alpha_k^dagger = (L_{e_k} + i L_{e_{k+4}}) / 2`
    pub alpha_dagger: [End8; 3],
}

/// Octonions whose left multiplications give `alpha_k` and `alpha_k^dagger`.
pub fn witt_octonions() -> ([ComplexOctonion; 3], [ComplexOctonion; 3]) {
    (
        [1, 2, 3].map(|k| witt_octonion(k, -1.0)),
        [1, 2, 3].map(|k| witt_octonion(k, 1.0)),
    )
}

pub fn witt_basis() -> WittBasis {
    let (a, ad) = witt_octonions();
    WittBasis {
        alpha: a.map(|x| left_matrix(&x)),
        alpha_dagger: ad.map(|x| left_matrix(&x)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnticommutatorReport {
    /// Max entry error of `{alpha_i, alpha_j^dagger} - delta_ij`.
    pub mixed: f64,
    /// Max entry of `{alpha_i, alpha_j}`.
    pub lowering: f64,
    /// Max entry of `{alpha_i^dagger, alpha_j^dagger}`.
    pub raising: f64,
}

impl AnticommutatorReport {
    pub fn max(&self) -> f64 {
        self.mixed.max(self.lowering).max(self.raising)
    }
}

impl WittBasis {
    pub fn anticommutators(&self) -> AnticommutatorReport {
        let id = End8::identity();
        let mut r = AnticommutatorReport {
            mixed: 0.0,
            lowering: 0.0,
            raising: 0.0,
        };
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { id.clone() } else { End8::zero() };
                r.mixed = r.mixed.max(
                    self.alpha[i]
                        .anticommutator(&self.alpha_dagger[j])
                        .max_abs_diff(&target),
                );
                r.lowering = r
                    .lowering
                    .max(self.alpha[i].anticommutator(&self.alpha[j]).max_abs());
                r.raising = r.raising.max(
                    self.alpha_dagger[i]
                        .anticommutator(&self.alpha_dagger[j])
                        .max_abs(),
                );
            }
        }
        r
    }

    /// `omega = alpha_1 alpha_2 alpha_3`
    pub fn omega(&self) -> End8 {
        &(&self.alpha[0] * &self.alpha[1]) * &self.alpha[2]
    }

    /// `omega^dagger = alpha_3^dagger alpha_2^dagger alpha_1^dagger`
    pub fn omega_dagger(&self) -> End8 {
        &(&self.alpha_dagger[2] * &self.alpha_dagger[1]) * &self.alpha_dagger[0]
    }

    /// Number operator `sum_k alpha_k^dagger alpha_k`.
    pub fn number_operator(&self) -> End8 {
        (0..3)
            .map(|k| &self.alpha_dagger[k] * &self.alpha[k])
            .reduce(|a, b| a + b)
            .expect("three modes")
    }
}

#[derive(Debug, Clone)]
pub struct Idempotents {
    pub omega: End8,
    pub omega_dagger: End8,
    /// `omega omega^dagger`, seed of the up-type ideal.
    pub up: End8,
    /// `omega^dagger omega`, seed of the down-type ideal.
    pub down: End8,
}

pub fn idempotents() -> Idempotents {
    let w = witt_basis();
    let omega = w.omega();
    let omega_dagger = w.omega_dagger();
    Idempotents {
        up: &omega * &omega_dagger,
        down: &omega_dagger * &omega,
        omega,
        omega_dagger,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ideal {
    U,
    D,
}

impl Ideal {
    pub fn name(self) -> &'static str {
        match self {
            Ideal::U => "u",
            Ideal::D => "d",
        }
    }
}

#[derive(Debug, Clone)]
pub struct IdealState {
    pub label: &'static str,
    pub matrix: End8,
    pub ideal: Ideal,
    /// Number of raising (for `u`) or lowering (for `d`) operators applied.
    pub grade: usize,
}

/// Per-state operator words: indices into the Witt basis, leftmost first.
const WORDS: [(&[usize], &str, &str); 8] = [
    (&[], "nu", "nubar"),
    (&[0], "dbar_r", "d_r"),
    (&[1], "dbar_g", "d_g"),
    (&[2], "dbar_b", "d_b"),
    (&[2, 1], "u_r", "ubar_r"),
    (&[0, 2], "u_g", "ubar_g"),
    (&[1, 0], "u_b", "ubar_b"),
    (&[2, 1, 0], "e+", "e-"),
];

/// The eight labelled basis states of one minimal left ideal.
pub fn ideal_basis(which: Ideal) -> Vec<IdealState> {
    let w = witt_basis();
    let idem = idempotents();
    let (ops, seed) = match which {
        Ideal::U => (&w.alpha_dagger, idem.up),
        Ideal::D => (&w.alpha, idem.down),
    };
    WORDS
        .iter()
        .map(|(word, up_label, down_label)| {
            let mut m = seed.clone();
            for &k in word.iter().rev() {
                m = &ops[k] * &m;
            }
            IdealState {
                label: if which == Ideal::U {
                    up_label
                } else {
                    down_label
                },
                matrix: m,
                ideal: which,
                grade: word.len(),
            }
        })
        .collect()
}

fn stack(states: &[IdealState]) -> DMatrix<Complex64> {
    DMatrix::from_fn(64, states.len(), |r, col| {
        states[col].matrix.matrix.as_slice()[r]
    })
}

/// Least-squares coordinates of `m` in the state basis and the residual norm.
pub fn coordinates(states: &[IdealState], m: &End8) -> Result<(Vec<Complex64>, f64)> {
    let a = stack(states);
    let b = DVector::from_column_slice(m.matrix.as_slice());
    let svd = a.clone().svd(true, true);
    let x = svd
        .solve(&b, 1e-12)
        .map_err(|e| Error::Numerical(format!("least squares in ideal basis: {e}")))?;
    let residual = (&a * &x - &b).norm();
    Ok((x.iter().copied().collect(), residual))
}

/// Numerical rank of the state matrices as vectors in `C^64`.
pub fn state_rank(states: &[IdealState]) -> usize {
    let sv = stack(states).svd(false, false).singular_values;
    let max = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-9 * max).count()
}

/// Residual of projecting `g * s` onto the span of the ideal, relative to `|g s|`.
pub fn closure_residual(states: &[IdealState], g: &End8, s: &End8) -> Result<f64> {
    let gs = g * s;
    let n = gs.matrix.norm();
    if n == 0.0 {
        return Ok(0.0);
    }
    Ok(coordinates(states, &gs)?.1 / n)
}

#[derive(Debug, Clone)]
pub struct SU3Generators {
    pub lambda: [End8; 8],
    pub q: End8,
}

pub fn su3_generators() -> SU3Generators {
    let w = witt_basis();
    let a = &w.alpha;
    let ad = &w.alpha_dagger;
    let p = |i: usize, j: usize| &ad[i] * &a[j];
    let l1 = -(p(1, 0) + p(0, 1));
    let l2 = p(1, 0).scale(I) - p(0, 1).scale(I);
    let l3 = p(1, 1) - p(0, 0);
    let l4 = -(p(0, 2) + p(2, 0));
    let l5 = p(2, 0).scale(I) - p(0, 2).scale(I);
    let l6 = -(p(2, 1) + p(1, 2));
    let l7 = p(2, 1).scale(I) - p(1, 2).scale(I);
    let l8 = (p(0, 0) + p(1, 1) - p(2, 2).scale_real(2.0)).scale_real(-1.0 / 3f64.sqrt());
    let q = (p(0, 0) + p(1, 1) + p(2, 2)).scale_real(1.0 / 3.0);
    SU3Generators {
        lambda: [l1, l2, l3, l4, l5, l6, l7, l8],
        q,
    }
}

/// Standard Gell-Mann matrices, used as the reference normalization.
pub fn gell_mann() -> [Matrix3<Complex64>; 8] {
    let z = c(0.0);
    let o = c(1.0);
    let s = 1.0 / 3f64.sqrt();
    [
        Matrix3::new(z, o, z, o, z, z, z, z, z),
        Matrix3::new(z, -I, z, I, z, z, z, z, z),
        Matrix3::new(o, z, z, z, -o, z, z, z, z),
        Matrix3::new(z, z, o, z, z, z, o, z, z),
        Matrix3::new(z, z, -I, z, z, z, I, z, z),
        Matrix3::new(z, z, z, z, z, o, z, o, z),
        Matrix3::new(z, z, z, z, z, -I, z, I, z),
        Matrix3::new(c(s), z, z, z, c(s), z, z, z, c(-2.0 * s)),
    ]
}

/// `(T3, T8)` weights of the fundamental representation, `T = lambda / 2`.
pub fn fundamental_weights() -> [[f64; 2]; 3] {
    let g = gell_mann();
    [0, 1, 2].map(|i| [g[2][(i, i)].re / 2.0, g[7][(i, i)].re / 2.0])
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureConstants {
    /// `f[a][b][c]` with `[L_a, L_b] = 2i sum_c f_abc L_c` (zero-based indices).
    pub f: Vec<Vec<Vec<f64>>>,
    /// Max residual of expanding each commutator over the generators.
    pub expansion_residual: f64,
    /// Max `|f_abc + f_bac|` and `|f_abc + f_acb|`.
    pub antisymmetry_residual: f64,
    /// Max entry of the Jacobi sum over all triples.
    pub jacobi_residual: f64,
    /// Max `|Im f_abc|`; the constants come out real.
    pub imaginary_part: f64,
}

fn expand_in(gens: &[End8], m: &End8) -> Result<(Vec<Complex64>, f64)> {
    let a = DMatrix::from_fn(64, gens.len(), |r, col| gens[col].matrix.as_slice()[r]);
    let b = DVector::from_column_slice(m.matrix.as_slice());
    let x = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-12)
        .map_err(|e| Error::Numerical(format!("generator expansion: {e}")))?;
    let res = (&a * &x - &b).iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok((x.iter().copied().collect(), res))
}

pub fn structure_constants(g: &SU3Generators) -> Result<StructureConstants> {
    let l = &g.lambda;
    let mut f = vec![vec![vec![0.0; 8]; 8]; 8];
    let mut expansion_residual = 0.0f64;
    let mut imaginary_part = 0.0f64;
    for a in 0..8 {
        for b in 0..8 {
            let (coef, res) = expand_in(l, &l[a].commutator(&l[b]))?;
            expansion_residual = expansion_residual.max(res);
            for cc in 0..8 {
                let v = coef[cc] / (2.0 * I);
                imaginary_part = imaginary_part.max(v.im.abs());
                f[a][b][cc] = v.re;
            }
        }
    }
    let mut antisymmetry_residual = 0.0f64;
    for a in 0..8 {
        for b in 0..8 {
            for cc in 0..8 {
                antisymmetry_residual = antisymmetry_residual
                    .max((f[a][b][cc] + f[b][a][cc]).abs())
                    .max((f[a][b][cc] + f[a][cc][b]).abs());
            }
        }
    }
    let mut jacobi_residual = 0.0f64;
    for a in 0..8 {
        for b in 0..8 {
            for cc in 0..8 {
                let j = l[a].commutator(&l[b].commutator(&l[cc]))
                    + l[b].commutator(&l[cc].commutator(&l[a]))
                    + l[cc].commutator(&l[a].commutator(&l[b]));
                jacobi_residual = jacobi_residual.max(j.max_abs());
            }
        }
    }
    Ok(StructureConstants {
        f,
        expansion_residual,
        antisymmetry_residual,
        jacobi_residual,
        imaginary_part,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Charge {
    pub label: &'static str,
    pub ideal: Ideal,
    pub grade: usize,
    pub value: f64,
    /// Exact value as `k/3` or an integer.
    pub rational: String,
}

fn thirds(v: f64) -> String {
    let k = (3.0 * v).round() as i64;
    if k % 3 == 0 {
        format!("{}", k / 3)
    } else {
        format!("{k}/3")
    }
}

/// Eigenvalue `c` with `op * s = c s`, or a consistency error.
fn eigenvalue_on(op: &End8, s: &End8) -> Result<f64> {
    let os = op * s;
    let denom: Complex64 = s.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().into();
    let num: Complex64 = s
        .matrix
        .iter()
        .zip(os.matrix.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    let cval = num / denom;
    let res = (os.matrix - s.matrix * cval).norm() / denom.re.sqrt();
    if res > IDEAL_TOL || cval.im.abs() > IDEAL_TOL {
        return Err(Error::Consistency(format!(
            "state is not an eigenvector (residual {res:.3e}, eigenvalue {cval})"
        )));
    }
    Ok(cval.re)
}

/// Electric charges: eigenvalues of `Q` on the up-type ideal and of `-Q*`
/// on the down-type ideal.
pub fn charges(states: &[IdealState]) -> Result<Vec<Charge>> {
    let g = su3_generators();
    let minus_q_conj = -g.q.conj();
    states
        .iter()
        .map(|s| {
            let op = match s.ideal {
                Ideal::U => &g.q,
                Ideal::D => &minus_q_conj,
            };
            let value = eigenvalue_on(op, &s.matrix)?;
            Ok(Charge {
                label: s.label,
                ideal: s.ideal,
                grade: s.grade,
                value,
                rational: thirds(value),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct GradeBlock {
    pub grade: usize,
    pub labels: Vec<&'static str>,
    pub casimir: f64,
    /// `max |C - casimir * 1|` on the block.
    pub casimir_spread: f64,
    /// `(T3, T8)` of each state.
    pub weights: Vec<[f64; 2]>,
    /// `"1"`, `"3"`, `"3bar"`, or `"?"` when no match is found.
    pub irrep: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RepresentationReport {
    pub ideal: Ideal,
    pub blocks: Vec<GradeBlock>,
    /// Largest Casimir entry coupling different grades.
    pub off_block: f64,
    /// e.g. `1+3bar+3+1`.
    pub decomposition: String,
}

fn weights_match(ws: &[[f64; 2]], reference: &[[f64; 2]]) -> bool {
    if ws.len() != reference.len() {
        return false;
    }
    let mut used = vec![false; reference.len()];
    ws.iter().all(|w| {
        reference.iter().enumerate().any(|(k, r)| {
            let hit = !used[k] && (w[0] - r[0]).abs() < 1e-9 && (w[1] - r[1]).abs() < 1e-9;
            if hit {
                used[k] = true;
            }
            hit
        })
    })
}

/// Matrix of `op` acting by left multiplication, in the state basis.
pub fn representation_matrix(states: &[IdealState], op: &End8) -> Result<DMatrix<Complex64>> {
    let n = states.len();
    let mut rho = DMatrix::zeros(n, n);
    for (j, s) in states.iter().enumerate() {
        let (x, res) = coordinates(states, &(op * &s.matrix))?;
        if res > IDEAL_TOL * (1.0 + s.matrix.matrix.norm()) {
            return Err(Error::Consistency(format!(
                "generator maps state {} out of the ideal (residual {res:.3e})",
                s.label
            )));
        }
        for i in 0..n {
            rho[(i, j)] = x[i];
        }
    }
    Ok(rho)
}

/// Quadratic Casimir and `(T3, T8)` weights on each grade subspace.
pub fn classify_representation(
    g: &SU3Generators,
    states: &[IdealState],
) -> Result<RepresentationReport> {
    let n = states.len();
    let rhos = g
        .lambda
        .iter()
        .map(|l| representation_matrix(states, l))
        .collect::<Result<Vec<_>>>()?;
    let mut casimir = DMatrix::<Complex64>::zeros(n, n);
    for r in &rhos {
        let t = r * c(0.5);
        casimir += &t * &t;
    }
    let mut off_block = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if states[i].grade != states[j].grade {
                off_block = off_block.max(casimir[(i, j)].norm());
            }
        }
    }
    if off_block > IDEAL_TOL {
        return Err(Error::Consistency(format!(
            "Casimir couples different grades (max entry {off_block:.3e})"
        )));
    }
    let fund = fundamental_weights();
    let anti = fund.map(|[a, b]| [-a, -b]);
    let max_grade = states.iter().map(|s| s.grade).max().unwrap_or(0);
    let mut blocks = Vec::new();
    for grade in 0..=max_grade {
        let idx: Vec<usize> = (0..n).filter(|&i| states[i].grade == grade).collect();
        if idx.is_empty() {
            continue;
        }
        let mean = idx.iter().map(|&i| casimir[(i, i)].re).sum::<f64>() / idx.len() as f64;
        let mut spread = 0.0f64;
        for &i in &idx {
            for &j in &idx {
                let target = if i == j { mean } else { 0.0 };
                spread = spread.max((casimir[(i, j)] - c(target)).norm());
            }
        }
        let weights: Vec<[f64; 2]> = idx
            .iter()
            .map(|&i| [rhos[2][(i, i)].re / 2.0, rhos[7][(i, i)].re / 2.0])
            .collect();
        let irrep = if idx.len() == 1 && mean.abs() < 1e-9 {
            "1"
        } else if weights_match(&weights, &fund) && (mean - 4.0 / 3.0).abs() < 1e-9 {
            "3"
        } else if weights_match(&weights, &anti) && (mean - 4.0 / 3.0).abs() < 1e-9 {
            "3bar"
        } else {
            "?"
        };
        blocks.push(GradeBlock {
            grade,
            labels: idx.iter().map(|&i| states[i].label).collect(),
            casimir: mean,
            casimir_spread: spread,
            weights,
            irrep: irrep.to_string(),
        });
    }
    let decomposition = blocks
        .iter()
        .map(|b| b.irrep.as_str())
        .collect::<Vec<_>>()
        .join("+");
    Ok(RepresentationReport {
        ideal: states.first().map(|s| s.ideal).unwrap_or(Ideal::U),
        blocks,
        off_block,
        decomposition,
    })
}

/// `exp(i t H)` for Hermitian `H`.
pub fn exp_i_hermitian(h: &End8, t: f64) -> End8 {
    let eig = SymmetricEigen::new(h.matrix);
    let phases = eig.eigenvalues.map(|l| Complex64::from_polar(1.0, t * l));
    let d = Mat8::from_diagonal(&phases);
    End8::new(
        eig.eigenvectors * d * eig.eigenvectors.adjoint(),
        crate::mult_algebra::Field::Complex,
    )
}

/// Max residual of `U alpha_j^dagger U^-1` outside `span{alpha^dagger}`
/// for `U = exp(i t Lambda_a)`, over all `a`, `j` and the given times.
pub fn witt_preservation_residual(times: &[f64]) -> Result<f64> {
    let w = witt_basis();
    let g = su3_generators();
    let gens = w.alpha_dagger.to_vec();
    let mut worst = 0.0f64;
    for l in &g.lambda {
        for &t in times {
            let u = exp_i_hermitian(l, t);
            let uinv = exp_i_hermitian(l, -t);
            for ad in &w.alpha_dagger {
                let conj = &(&u * ad) * &uinv;
                worst = worst.max(expand_in(&gens, &conj)?.1);
            }
        }
    }
    Ok(worst)
}
