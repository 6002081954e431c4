use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::lattice::{on_shell_residual, LatticeSpec, SectorKernel};
use super::sectors::{build_vacuum_aux, AuxSummand, MassData};
use crate::gamma::{max_abs, GammaSet, Mat4};
use crate::Result;

/// Max-norm of `(i gamma^mu D_mu - m) K` over displacements with both time
/// neighbours present, where `D_mu` is the symmetric difference.
pub fn lattice_dirac_residual(kernel: &SectorKernel, mass: f64) -> f64 {
    let mass_term = Mat4::identity() * Complex64::new(-mass, 0.0);
    lattice_operator_residual(kernel, &GammaSet::dirac(), &mass_term)
}

/// Max-norm of `(i gamma^mu D_mu + B) K` for a constant matrix `B`.
pub fn lattice_operator_residual(
    kernel: &SectorKernel,
    gammas: &GammaSet,
    mass_term: &Mat4,
) -> f64 {
    let lat = &kernel.lattice;
    let i = Complex64::new(0.0, 1.0);
    let inv = Complex64::new(1.0 / (2.0 * lat.a), 0.0);
    let d = lat.dims.spatial();
    (0..kernel.values.len())
        .into_par_iter()
        .filter_map(|idx| {
            let (dt, dx) = lat.displacement(idx);
            let up = lat.index(dt + 1, dx)?;
            let down = lat.index(dt - 1, dx)?;
            let mut r = gammas.gamma[0] * (kernel.values[up] - kernel.values[down]) * inv;
            for j in 0..d {
                let mut p = dx;
                let mut q = dx;
                p[j] += 1;
                q[j] -= 1;
                let fwd = lat.index(dt, p).expect("spatial wrap");
                let bwd = lat.index(dt, q).expect("spatial wrap");
                r += gammas.gamma[j + 1] * (kernel.values[fwd] - kernel.values[bwd]) * inv;
            }
            Some(max_abs(&(r * i + mass_term * kernel.values[idx])))
        })
        .reduce(|| 0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct SummandResidual {
    pub sector: usize,
    pub generation: usize,
    pub mass: f64,
    pub lattice: f64,
    pub momentum: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiracResidual {
    pub summands: Vec<SummandResidual>,
    pub per_sector: [f64; 8],
    pub momentum_max: f64,
}

/// Residuals of the Dirac equation with the block mass matrix on each auxiliary summand.
pub fn dirac_residual(aux: &[AuxSummand]) -> DiracResidual {
    let summands: Vec<SummandResidual> = aux
        .iter()
        .map(|s| SummandResidual {
            sector: s.sector,
            generation: s.generation,
            mass: s.mass,
            lattice: lattice_dirac_residual(&s.kernel, s.mass),
            momentum: on_shell_residual(&s.kernel, s.mass),
        })
        .collect();
    let mut per_sector = [0.0f64; 8];
    for s in &summands {
        per_sector[s.sector] = per_sector[s.sector].max(s.lattice);
    }
    let momentum_max = summands.iter().map(|s| s.momentum).fold(0.0, f64::max);
    DiracResidual {
        summands,
        per_sector,
        momentum_max,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Convergence {
    pub coarse: LatticeSpec,
    pub fine: LatticeSpec,
    pub coarse_residual: f64,
    pub fine_residual: f64,
    /// `log2(coarse / fine)`; second order gives 2.
    pub order: f64,
}

/// Largest summand residual on the lattice and on its refinement in the same box.
pub fn convergence(md: &MassData, lattice: &LatticeSpec) -> Result<Convergence> {
    let fine = lattice.refined();
    let worst = |lat: &LatticeSpec| -> Result<f64> {
        let aux = build_vacuum_aux(md, lat)?;
        Ok(dirac_residual(&aux)
            .per_sector
            .iter()
            .copied()
            .fold(0.0, f64::max))
    };
    let c = worst(lattice)?;
    let f = worst(&fine)?;
    Ok(Convergence {
        coarse: *lattice,
        fine,
        coarse_residual: c,
        fine_residual: f,
        order: (c / f).log2(),
    })
}

/// Same measurement for a single sea of the given mass.
pub fn sea_convergence(mass: f64, lattice: &LatticeSpec) -> Result<Convergence> {
    let fine = lattice.refined();
    let c = lattice_dirac_residual(&super::lattice::sea_kernel(mass, lattice)?, mass);
    let f = lattice_dirac_residual(&super::lattice::sea_kernel(mass, &fine)?, mass);
    Ok(Convergence {
        coarse: *lattice,
        fine,
        coarse_residual: c,
        fine_residual: f,
        order: (c / f).log2(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::lattice::Dims;
    use super::*;

    #[test]
    fn second_order_convergence() {
        let lat = LatticeSpec::new(16, 16, 0.1, 1.0, Dims::D1p1).unwrap();
        for m in [0.8, 2.0] {
            let c = sea_convergence(m, &lat).unwrap();
            assert!((c.order - 2.0).abs() < 0.2, "mass {m}: {c:?}");
        }
    }

    #[test]
    fn massless_one_plus_one_is_exact() {
        // Symmetric differences with equal steps are exact on functions of t +- x.
        let lat = LatticeSpec::new(16, 16, 0.1, 1.0, Dims::D1p1).unwrap();
        let k = super::super::lattice::sea_kernel(0.0, &lat).unwrap();
        assert!(lattice_dirac_residual(&k, 0.0) < 1e-13 * k.max_abs());
    }

    #[test]
    fn massless_second_order_in_four_dimensions() {
        let lat = LatticeSpec::new(6, 2, 0.1, 1.0, Dims::D1p3).unwrap();
        let c = sea_convergence(0.0, &lat).unwrap();
        assert!((c.order - 2.0).abs() < 0.2, "{c:?}");
    }

    #[test]
    fn momentum_space_residual_vanishes() {
        let md = MassData {
            charged_masses: [0.1, 0.4, 0.9],
            neutrino_masses: [0.0, 0.02, 0.05],
            tau_reg: 0.5,
            m: 1.0,
        };
        let lat = LatticeSpec::new(8, 4, 0.25, 1.0, Dims::D1p1).unwrap();
        let r = dirac_residual(&build_vacuum_aux(&md, &lat).unwrap());
        assert_eq!(r.summands.len(), 25);
        assert!(r.momentum_max < 1e-10);
        assert_eq!(r.summands[3].lattice, 0.0);
    }
}
