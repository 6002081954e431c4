use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use super::point::{
    hermitian_eigen, operator_norm, zero_threshold, CMatrix, OperatorPoint, SystemConfig,
};
use super::spectrum::{eigenvalues, product_spectrum, ProductSpectrum};
use crate::{Error, Result};

pub type CVector = DVector<Complex64>;

/// Image of `x` with the spin product restricted to it.
#[derive(Debug, Clone)]
pub struct SpinSpace {
    pub basepoint: OperatorPoint,
    /// Orthonormal eigenvectors of `x` with non-zero eigenvalue, as columns.
    pub basis: CMatrix,
    /// Eigenvalues of `x` on the basis columns.
    pub eigenvalues: Vec<f64>,
    pub signature: Signature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

impl SpinSpace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Gram matrix `-B^dagger x B` of the spin product in the basis.
    pub fn gram(&self) -> CMatrix {
        CMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&l| Complex64::new(-l, 0.0)),
        ))
    }

    /// Orthogonal projector onto the spin space.
    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// Hilbert-space vector to basis coordinates (projecting first).
    pub fn coordinates(&self, u: &CVector) -> CVector {
        self.basis.adjoint() * u
    }
}

pub fn spin_space(x: &OperatorPoint) -> SpinSpace {
    let (eigs, vecs) = hermitian_eigen(x.matrix());
    let tol = zero_threshold(&eigs);
    let keep: Vec<usize> = (0..eigs.len()).filter(|&i| eigs[i].abs() > tol).collect();
    let basis = CMatrix::from_fn(x.dim(), keep.len(), |r, c| vecs[(r, keep[c])]);
    let eigenvalues: Vec<f64> = keep.iter().map(|&i| eigs[i]).collect();
    // The form is -x, so negative eigenvalues of x are the positive directions.
    let p = eigenvalues.iter().filter(|&&l| l < 0.0).count();
    let q = eigenvalues.len() - p;
    SpinSpace {
        basepoint: x.clone(),
        basis,
        eigenvalues,
        signature: Signature { p, q },
    }
}

/// `-<u, x v>`; components outside the image of `x` drop out automatically.
pub fn spin_product(x: &OperatorPoint, u: &CVector, v: &CVector) -> Complex64 {
    -u.dotc(&(x.matrix() * v))
}

/// `pi_x y` restricted to `S_y`, as a `dim S_x` by `dim S_y` matrix in the spin bases.
pub fn kernel(sx: &SpinSpace, sy: &SpinSpace) -> CMatrix {
    sx.basis.adjoint() * sy.basepoint.matrix() * &sy.basis
}

pub fn closed_chain(sx: &SpinSpace, sy: &SpinSpace) -> CMatrix {
    kernel(sx, sy) * kernel(sy, sx)
}

/// Largest mismatch between the non-zero eigenvalues of the closed chain and
/// the product spectrum, relative to the largest modulus (at least 1).
/// Infinite when the ranks differ.
pub fn closed_chain_deviation(
    x: &OperatorPoint,
    y: &OperatorPoint,
    cfg: &SystemConfig,
) -> Result<f64> {
    let spec = product_spectrum(x, y, cfg)?;
    let eigs = eigenvalues(&closed_chain(&spin_space(x), &spin_space(y)))?;
    let cut = 1e-9 * operator_norm(x.matrix()) * operator_norm(y.matrix());
    let nonzero: Vec<Complex64> = eigs.into_iter().filter(|z| z.norm() > cut).collect();
    if nonzero.len() != spec.rank() {
        return Ok(f64::INFINITY);
    }
    let chain = ProductSpectrum::from_values(nonzero, cfg.n)?;
    let scale = spec.moduli().first().copied().unwrap_or(0.0).max(1.0);
    // Equal moduli can sort differently under roundoff, so match greedily.
    let mut unused: Vec<Complex64> = spec.values().to_vec();
    let mut worst = 0.0f64;
    for a in chain.values() {
        let (k, d) = unused
            .iter()
            .enumerate()
            .map(|(k, b)| (k, (a - b).norm()))
            .fold(
                (0, f64::INFINITY),
                |best, cur| if cur.1 < best.1 { cur } else { best },
            );
        unused.swap_remove(k);
        worst = worst.max(d / scale);
    }
    Ok(worst)
}

/// `pi_x u` at each point, as Hilbert-space vectors.
pub fn physical_wavefunction(u: &CVector, spaces: &[SpinSpace]) -> Vec<CVector> {
    spaces.iter().map(|s| s.projector() * u).collect()
}

/// Relative residual of `P(x,y) phi = -sum_i psi_i(x) <psi_i(y)|phi>_y` over the
/// standard basis of the Hilbert space, with `phi` projected into `S_y` first.
pub fn completeness_check(sx: &SpinSpace, sy: &SpinSpace, phi: &CVector) -> f64 {
    let f = phi.len();
    let phi_y = sy.projector() * phi;
    let lhs = sx.projector() * sy.basepoint.matrix() * &phi_y;
    let mut rhs = CVector::zeros(f);
    for i in 0..f {
        let mut b = CVector::zeros(f);
        b[i] = Complex64::new(1.0, 0.0);
        let psi = physical_wavefunction(&b, &[sx.clone(), sy.clone()]);
        let sp = spin_product(&sy.basepoint, &psi[1], &phi_y);
        rhs -= &psi[0] * sp;
    }
    let scale = operator_norm(sx.basepoint.matrix()).max(1.0)
        * operator_norm(sy.basepoint.matrix()).max(1.0)
        * phi.norm().max(1.0);
    (lhs - rhs).norm() / scale
}

const SQRT_TOL: f64 = 1e-14;
const SQRT_MAX_ITER: usize = 100;
const CONNECT_TOL: f64 = 1e-9;

/// Principal square root by Denman-Beavers iteration.
pub fn principal_sqrt(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = CMatrix::identity(n, n);
    for _ in 0..SQRT_MAX_ITER {
        let yi = y
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Numerical("singular iterate in matrix square root".into()))?;
        let zi = z
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Numerical("singular iterate in matrix square root".into()))?;
        let half = Complex64::new(0.5, 0.0);
        let y_next = (&y + zi) * half;
        let z_next = (&z + yi) * half;
        let change = operator_norm(&(&y_next - &y));
        y = y_next;
        z = z_next;
        if change <= SQRT_TOL * operator_norm(&y).max(1e-300) {
            return Ok(y);
        }
    }
    Err(Error::Numerical(format!(
        "matrix square root did not converge in {SQRT_MAX_ITER} iterations"
    )))
}

fn check_connectable(sx: &SpinSpace, sy: &SpinSpace) -> Result<CMatrix> {
    if sx.dim() != sy.dim() {
        return Err(Error::NotSpinConnectable(format!(
            "spin dimensions differ: {} vs {}",
            sx.dim(),
            sy.dim()
        )));
    }
    let p = kernel(sx, sy);
    if p.is_empty() {
        return Ok(p);
    }
    let sv = p.singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if smax == 0.0 || smin <= CONNECT_TOL * smax {
        return Err(Error::NotSpinConnectable(format!(
            "kernel is singular (condition {:.3e})",
            smax / smin
        )));
    }
    for l in eigenvalues(&closed_chain(sy, sx))? {
        if l.re < 0.0 && l.im.abs() <= CONNECT_TOL * l.norm() {
            return Err(Error::NotSpinConnectable(format!(
                "closed chain has eigenvalue {l} on the negative real axis"
            )));
        }
    }
    Ok(p)
}

/// Isometric factor of the polar decomposition of `P(x,y)`, a map `S_y -> S_x`.
///
/// The absolute value is `sqrt(P^* P)` with the adjoint `P^* = G_y^{-1} P^dagger G_x`
/// taken with respect to the spin products; `D_{x,x}` is the identity.
pub fn spin_connection(sx: &SpinSpace, sy: &SpinSpace) -> Result<CMatrix> {
    let same = sx.basepoint.dim() == sy.basepoint.dim()
        && operator_norm(&(sx.basepoint.matrix() - sy.basepoint.matrix()))
            <= CONNECT_TOL * operator_norm(sx.basepoint.matrix()).max(1e-300);
    if same {
        return Ok(CMatrix::identity(sx.dim(), sx.dim()));
    }
    let p = check_connectable(sx, sy)?;
    let gy_inv = sy
        .gram()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("degenerate spin product".into()))?;
    let adj = gy_inv * p.adjoint() * sx.gram();
    let abs = principal_sqrt(&(adj * &p))?;
    let abs_inv = abs
        .try_inverse()
        .ok_or_else(|| Error::NotSpinConnectable("absolute value is singular".into()))?;
    Ok(p * abs_inv)
}

/// Operator norm of `D^dagger G_x D - G_y`, relative to `|G_y|`.
pub fn unitarity_residual(d: &CMatrix, sx: &SpinSpace, sy: &SpinSpace) -> f64 {
    let gy = sy.gram();
    let diff = d.adjoint() * sx.gram() * d - &gy;
    operator_norm(&diff) / operator_norm(&gy).max(1e-300)
}

/// `D_{x,y} D_{y,z} D_{z,x}`
pub fn holonomy(sx: &SpinSpace, sy: &SpinSpace, sz: &SpinSpace) -> Result<CMatrix> {
    Ok(spin_connection(sx, sy)? * spin_connection(sy, sz)? * spin_connection(sz, sx)?)
}

#[cfg(test)]
mod tests {
    use super::super::point::{diag, validate_point, SystemConfig};
    use super::super::random::random_point;
    use super::super::spectrum::nonzero_product_eigenvalues;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn signature_examples() {
        let c = SystemConfig::new(2, 1, 1.0, 0.0).unwrap();
        let s = spin_space(&validate_point(diag(&[1.0, -1.0]), &c).unwrap());
        assert_eq!(s.signature, Signature { p: 1, q: 1 });
        let s = spin_space(&validate_point(diag(&[1.0, 0.0]), &c).unwrap());
        assert_eq!(s.dim(), 1);
        assert_eq!(s.signature, Signature { p: 0, q: 1 });
    }

    #[test]
    fn spin_product_is_hermitian_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = SystemConfig::new(5, 2, 1.0, 0.0).unwrap();
        let x = random_point(&mut rng, &c);
        let u = CVector::from_fn(5, |i, _| Complex64::new(i as f64 * 0.3 - 0.5, 0.2));
        assert!(spin_product(&x, &u, &u).im.abs() < 1e-14);
    }

    #[test]
    fn kernel_trace_and_orthogonal_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = SystemConfig::new(6, 2, 1.0, 0.0).unwrap();
        let x = random_point(&mut rng, &c);
        let sx = spin_space(&x);
        assert!((kernel(&sx, &sx).trace().re - x.trace()).abs() < 1e-12);

        let a = validate_point(
            diag(&[1.0, -1.0, 0.0, 0.0]),
            &SystemConfig::new(4, 1, 1.0, 0.0).unwrap(),
        )
        .unwrap();
        let b = validate_point(
            diag(&[0.0, 0.0, 2.0, -1.0]),
            &SystemConfig::new(4, 1, 1.0, 0.0).unwrap(),
        )
        .unwrap();
        let chain = closed_chain(&spin_space(&a), &spin_space(&b));
        assert_eq!(chain.iter().map(|z| z.norm()).fold(0.0, f64::max), 0.0);
    }

    #[test]
    fn closed_chain_matches_product_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = SystemConfig::new(7, 2, 1.0, 0.0).unwrap();
        for _ in 0..10 {
            let x = random_point(&mut rng, &c);
            let y = random_point(&mut rng, &c);
            let mut a = eigenvalues(&closed_chain(&spin_space(&x), &spin_space(&y))).unwrap();
            let (mut b, _) = nonzero_product_eigenvalues(x.matrix(), y.matrix(), c.n).unwrap();
            let key = |z: &Complex64| {
                (z.re * 1e6).round() as i64 * 1_000_000_000 + (z.im * 1e6).round() as i64
            };
            a.sort_by_key(key);
            b.sort_by_key(key);
            assert_eq!(a.len(), b.len());
            for (p, q) in a.iter().zip(&b) {
                assert!((p - q).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn wavefunctions_and_completeness() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let c = SystemConfig::new(6, 2, 1.0, 0.0).unwrap();
        let x = random_point(&mut rng, &c);
        let y = random_point(&mut rng, &c);
        let (sx, sy) = (spin_space(&x), spin_space(&y));
        let phi = CVector::from_fn(6, |i, _| Complex64::new((i as f64).sin(), (i as f64).cos()));
        assert!(completeness_check(&sx, &sy, &phi) < 1e-12);

        // Kernel vector of x projects to zero.
        let d = validate_point(
            diag(&[1.0, 0.0]),
            &SystemConfig::new(2, 1, 1.0, 0.0).unwrap(),
        )
        .unwrap();
        let sd = spin_space(&d);
        let u = CVector::from_vec(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert_eq!(physical_wavefunction(&u, &[sd.clone()])[0].norm(), 0.0);
        // Single point: P(x,x) phi = x phi on S_x.
        let phi = sx.basis.column(0).into_owned();
        let lhs = &sx.basis * kernel(&sx, &sx) * sx.coordinates(&phi);
        assert!((lhs - x.matrix() * &phi).norm() < 1e-12);
    }

    #[test]
    fn connection_identity_unitarity_and_holonomy() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = SystemConfig::new(5, 2, 1.0, 0.0).unwrap();
        let x = random_point(&mut rng, &c);
        let sx = spin_space(&x);
        let d = spin_connection(&sx, &sx).unwrap();
        assert_eq!(d, CMatrix::identity(4, 4));
        // Draw until every pair avoids the negative real axis.
        let (sy, sz) = loop {
            let sy = spin_space(&random_point(&mut rng, &c));
            let sz = spin_space(&random_point(&mut rng, &c));
            if holonomy(&sx, &sy, &sz).is_ok() {
                break (sy, sz);
            }
        };
        let dxy = spin_connection(&sx, &sy).unwrap();
        assert!(unitarity_residual(&dxy, &sx, &sy) < 1e-8);
        let loop_a = holonomy(&sx, &sy, &sz).unwrap();
        let loop_b = holonomy(&sx, &sz, &sy).unwrap();
        assert!(operator_norm(&(loop_a * loop_b - CMatrix::identity(4, 4))) < 1e-8);
    }

    #[test]
    fn dimension_mismatch_is_not_connectable() {
        let c = SystemConfig::new(3, 1, 1.0, 0.0).unwrap();
        let a = spin_space(&validate_point(diag(&[1.0, -1.0, 0.0]), &c).unwrap());
        let b = spin_space(&validate_point(diag(&[1.0, 0.0, 0.0]), &c).unwrap());
        assert!(matches!(
            spin_connection(&a, &b),
            Err(Error::NotSpinConnectable(_))
        ));
    }

    #[test]
    fn sqrt_of_diagonal() {
        let a = diag(&[4.0, 9.0, 0.25]);
        let r = principal_sqrt(&a).unwrap();
        assert!(operator_norm(&(r - diag(&[2.0, 3.0, 0.5]))) < 1e-13);
    }
}
