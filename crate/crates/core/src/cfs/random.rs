use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use super::point::{CMatrix, OperatorPoint, SystemConfig};

/// Haar-like unitary from the QR factor of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, f: usize) -> CMatrix {
    let g = CMatrix::from_fn(f, f, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    // Fix the phase freedom so the distribution does not depend on the QR convention.
    let phases = CMatrix::from_fn(f, f, |i, j| {
        if i == j && r[(i, i)].norm() > 0.0 {
            r[(i, i)] / r[(i, i)].norm()
        } else if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    q * phases
}

/// Random point with `p` eigenvalues in `[0.5, 2]` and `q` in `[-2, -0.5]`.
pub fn random_point_with<R: Rng + ?Sized>(
    rng: &mut R,
    f: usize,
    p: usize,
    q: usize,
) -> OperatorPoint {
    assert!(
        p + q <= f,
        "signature ({p}, {q}) does not fit dimension {f}"
    );
    let u = random_unitary(rng, f);
    let mag = Uniform::new(0.5, 2.0).expect("valid range");
    let diag: Vec<Complex64> = (0..f)
        .map(|i| {
            let v = if i < p {
                mag.sample(rng)
            } else if i < p + q {
                -mag.sample(rng)
            } else {
                0.0
            };
            Complex64::new(v, 0.0)
        })
        .collect();
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
    let m = &u * d * u.adjoint();
    let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    OperatorPoint::from_matrix_unchecked(m)
}

/// Random point of maximal rank allowed by the configuration.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, cfg: &SystemConfig) -> OperatorPoint {
    let p = cfg.n.min(cfg.f);
    let q = cfg.n.min(cfg.f - p);
    random_point_with(rng, cfg.f, p, q)
}
