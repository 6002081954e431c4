//! Local correlation operators from the occupied sea states.
//!
//! Each kernel mode `M exp(-ik.xi)` factors as `-M gamma0 = V V^dagger` with
//! `V` of rank at most two, which gives the occupied wavefunctions
//! `psi_s(x) = V_s exp(-ik.x)`. With this normalization the kernel is recovered
//! as `P(x,y) = -sum_s psi_s(x) psi_s(y)^dagger gamma0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lattice::{physical, Mode, SectorKernel};
use super::sectors::{to_direct, OctonionKernel};
use crate::cfs::point::{hermitian_eigen, CMatrix};
use crate::cfs::{validate_point, OperatorPoint, SystemConfig};
use crate::gamma::{GammaSet, Mat4};
use crate::{Error, Result};

/// Description recorded alongside stored kernels.
pub const GRAM_CONVENTION: &str =
    "psi_s(x) = V_s exp(-i k.x) with -M gamma0 = V V^dagger per mode; F(x)_ij = -psi_i(x)^dagger gamma0 psi_j(x)";

const FACTOR_TOL: f64 = 1e-12;

/// Occupied spinors of one mode, as columns scaled by the mode weight.
fn mode_spinors(mode: &Mode, g0: &Mat4) -> Vec<[Complex64; 4]> {
    let m = -(mode.matrix * g0);
    let dm = CMatrix::from_fn(4, 4, |i, j| m[(i, j)]);
    let (eigs, vecs) = hermitian_eigen(&dm);
    let scale = eigs.iter().fold(0.0f64, |a, l| a.max(l.abs()));
    let mut out = Vec::new();
    for (c, &l) in eigs.iter().enumerate() {
        if l > FACTOR_TOL * scale && l > 0.0 {
            let s = l.sqrt();
            out.push(std::array::from_fn(|r| vecs[(r, c)] * s));
        }
    }
    out
}

/// Number of occupied states the Hilbert space gets from one mode.
const STATES_PER_MODE: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Occupation {
    Sea,
    Empty,
}

/// `F(x)` on the span of all sea states of the given sectors; the spin dimension
/// is two per sector.
pub fn local_correlation(
    sectors: &[SectorKernel],
    point: [i64; 4],
    kappa: f64,
    occupation: Occupation,
) -> Result<(OperatorPoint, SystemConfig)> {
    let Some(first) = sectors.first() else {
        return Err(Error::Domain("no sectors".into()));
    };
    let g0 = GammaSet::dirac().gamma[0];
    let x = physical(&first.lattice, point[0], [point[1], point[2], point[3]]);
    // Columns of the block wavefunction matrix, grouped per sector.
    let mut columns: Vec<(usize, [Complex64; 4])> = Vec::new();
    let mut total = 0usize;
    for (s, kernel) in sectors.iter().enumerate() {
        for mode in &kernel.modes {
            let spinors = mode_spinors(mode, &g0);
            if spinors.len() > STATES_PER_MODE {
                return Err(Error::Consistency(format!(
                    "mode has {} occupied directions, expected at most {STATES_PER_MODE}",
                    spinors.len()
                )));
            }
            let phase = mode.phase(x);
            for slot in 0..STATES_PER_MODE {
                let v = match (occupation, spinors.get(slot)) {
                    (Occupation::Sea, Some(v)) => std::array::from_fn(|r| v[r] * phase),
                    _ => [Complex64::new(0.0, 0.0); 4],
                };
                columns.push((s, v));
                total += 1;
            }
        }
    }
    let mut f = CMatrix::zeros(total, total);
    for (i, (si, vi)) in columns.iter().enumerate() {
        for (j, (sj, vj)) in columns.iter().enumerate().skip(i) {
            if si != sj {
                continue;
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..4 {
                for c in 0..4 {
                    acc += vi[r].conj() * g0[(r, c)] * vj[c];
                }
            }
            f[(i, j)] = -acc;
            f[(j, i)] = -acc.conj();
        }
    }
    let cfg = SystemConfig::new(total.max(1), 2 * sectors.len(), kappa, 0.0)?;
    if total == 0 {
        return Ok((validate_point(CMatrix::zeros(1, 1), &cfg)?, cfg));
    }
    Ok((validate_point(f, &cfg)?, cfg))
}

pub fn local_correlation_octonionic(
    ok: &OctonionKernel,
    point: [i64; 4],
    kappa: f64,
    occupation: Occupation,
) -> Result<(OperatorPoint, SystemConfig)> {
    local_correlation(&to_direct(ok), point, kappa, occupation)
}

#[cfg(test)]
mod tests {
    use super::super::lattice::{sea_kernel, Dims, LatticeSpec};
    use super::*;
    use crate::cfs::point::signature_counts;
    use crate::cfs::point::zero_threshold;

    fn lat() -> LatticeSpec {
        LatticeSpec::new(4, 2, 0.5, 0.5, Dims::D1p1).unwrap()
    }

    #[test]
    fn factorization_reproduces_kernel() {
        let k = sea_kernel(0.6, &lat()).unwrap();
        let g0 = GammaSet::dirac().gamma[0];
        for mode in &k.modes {
            let mut back = Mat4::zeros();
            for v in mode_spinors(mode, &g0) {
                let col = nalgebra::Vector4::from_column_slice(&v);
                back -= col * col.adjoint() * g0;
            }
            assert!(crate::gamma::max_abs(&(back - mode.matrix)) < 1e-15);
        }
    }

    #[test]
    fn single_sector_rank_and_signature() {
        let k = sea_kernel(0.6, &lat()).unwrap();
        let (f, cfg) = local_correlation(&[k], [0, 1, 0, 0], 1.0, Occupation::Sea).unwrap();
        assert_eq!(cfg.n, 2);
        let (eigs, _) = hermitian_eigen(f.matrix());
        let (p, q) = signature_counts(&eigs, zero_threshold(&eigs));
        assert!(p <= 2 && q <= 2 && p + q <= 4);
        assert!(p + q > 0);
    }

    #[test]
    fn homogeneous_spectra() {
        let k = sea_kernel(0.3, &lat()).unwrap();
        let spec = |pt| {
            let (f, _) =
                local_correlation(std::slice::from_ref(&k), pt, 1.0, Occupation::Sea).unwrap();
            let (mut e, _) = hermitian_eigen(f.matrix());
            e.sort_by(f64::total_cmp);
            e
        };
        let a = spec([0, 0, 0, 0]);
        let b = spec([1, 3, 0, 0]);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn empty_sea_gives_zero() {
        let k = sea_kernel(0.3, &lat()).unwrap();
        let (f, _) = local_correlation(&[k], [0, 0, 0, 0], 1.0, Occupation::Empty).unwrap();
        assert!(f.matrix().iter().all(|z| *z == Complex64::new(0.0, 0.0)));
    }
}
