use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use octo_cfs::cfs::random::random_point;
use octo_cfs::cfs::{lagrangian, validate_point, SystemConfig};
use octo_cfs::mult_algebra::{left_matrix, right_matrix};
use octo_cfs::octonion::{ComplexOctonion, Octonion};
use octo_cfs::potentials::{
    one_loop_gradient, one_loop_potential, tree_gradient, tree_potential, LoopParams, TreeParams,
};

fn octonion() -> impl Strategy<Value = Octonion> {
    prop::array::uniform8(-3.0f64..3.0).prop_map(Octonion::new)
}

fn system() -> impl Strategy<Value = (SystemConfig, u64)> {
    (2usize..=8, 1usize..=3, 0.0f64..2.0, any::<u64>())
        .prop_map(|(f, n, kappa, seed)| (SystemConfig::new(f, n.min(f), kappa, 0.0).unwrap(), seed))
}

proptest! {
    #[test]
    fn norm_is_multiplicative(a in octonion(), b in octonion()) {
        let lhs = a.product(&b).norm();
        let rhs = a.norm() * b.norm();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn alternative_laws(a in octonion(), b in octonion()) {
        let scale = 1.0 + a.norm() * a.norm() * b.norm();
        let s = b.norm() * b.norm() * a.norm() + scale;
        prop_assert!(Octonion::associator(&a, &a, &b).norm() <= 1e-12 * scale);
        prop_assert!(Octonion::associator(&a, &b, &b).norm() <= 1e-12 * s);
    }

    #[test]
    fn conjugate_reverses_products(a in octonion(), b in octonion()) {
        let lhs = a.product(&b).conj();
        let rhs = b.conj().product(&a.conj());
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * (1.0 + a.norm() * b.norm()));
    }

    #[test]
    fn multiplication_matrices_act_as_products(a in octonion(), b in octonion()) {
        let z = b.complexify();
        let l = left_matrix(&a).apply(&z);
        let r = right_matrix(&a).apply(&z);
        let tol = 1e-12 * (1.0 + a.norm() * b.norm());
        prop_assert!(l.max_abs_diff(&a.product(&b).complexify()) <= tol);
        prop_assert!(r.max_abs_diff(&b.product(&a).complexify()) <= tol);
    }

    #[test]
    fn split_round_trip(re in octonion(), im in octonion()) {
        let z = ComplexOctonion::new(std::array::from_fn(|i| Complex64::new(re.coeffs[i], im.coeffs[i])));
        prop_assert_eq!(ComplexOctonion::unsplit(&z.split()), z);
    }

    #[test]
    fn lagrangian_is_symmetric((cfg, seed) in system()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_point(&mut rng, &cfg);
        let y = random_point(&mut rng, &cfg);
        let a = lagrangian(&x, &y, &cfg).unwrap();
        let b = lagrangian(&y, &x, &cfg).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
    }

    #[test]
    fn lagrangian_scales_quadratically((cfg, seed) in system(), alpha in 0.1f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_point(&mut rng, &cfg);
        let y = random_point(&mut rng, &cfg);
        let scaled = validate_point(x.matrix() * Complex64::new(alpha, 0.0), &cfg).unwrap();
        let a = lagrangian(&scaled, &y, &cfg).unwrap();
        let b = alpha * alpha * lagrangian(&x, &y, &cfg).unwrap();
        prop_assert!((a - b).abs() <= 1e-8 * (1.0 + b.abs()));
    }

    #[test]
    fn tree_gradient_matches_differences(
        mu2 in -2.0f64..2.0, l1 in 0.1f64..2.0, l2 in -1.0f64..3.0,
        sl in 0.1f64..3.0, sr in 0.1f64..3.0,
    ) {
        let p = TreeParams::new(mu2, l1, l2).unwrap();
        let h = 1e-6;
        let g = tree_gradient(sl, sr, &p);
        let dl = (tree_potential(sl + h, sr, &p).unwrap() - tree_potential(sl - h, sr, &p).unwrap()) / (2.0 * h);
        let dr = (tree_potential(sl, sr + h, &p).unwrap() - tree_potential(sl, sr - h, &p).unwrap()) / (2.0 * h);
        prop_assert!((g[0] - dl).abs() <= 1e-7 * (1.0 + dl.abs()));
        prop_assert!((g[1] - dr).abs() <= 1e-7 * (1.0 + dr.abs()));
    }

    #[test]
    fn loop_gradient_matches_differences(
        l1 in 0.001f64..0.05, l2 in -0.01f64..0.05, g in 0.5f64..1.5,
        sl in 0.1f64..5.0, sr in 0.1f64..5.0,
    ) {
        let p = LoopParams { lambda1: l1, lambda2: l2, g, m_scale: 1.0 };
        let h = 1e-6;
        let grad = one_loop_gradient(sl, sr, &p).unwrap();
        let dl = (one_loop_potential(sl + h, sr, &p).unwrap() - one_loop_potential(sl - h, sr, &p).unwrap()) / (2.0 * h);
        let dr = (one_loop_potential(sl, sr + h, &p).unwrap() - one_loop_potential(sl, sr - h, &p).unwrap()) / (2.0 * h);
        prop_assert!((grad[0] - dl).abs() <= 1e-7 * (1.0 + dl.abs()));
        prop_assert!((grad[1] - dr).abs() <= 1e-7 * (1.0 + dr.abs()));
    }
}
