use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lattice::{sea_kernel, LatticeSpec, Mode, SectorKernel};
use crate::gamma::{GammaSet, Mat4};
use crate::mult_algebra::End8;
use crate::{Error, Result};

pub const SECTOR_LABELS: [&str; 8] = ["N", "C1", "C2", "C3", "C4", "C5", "C6", "C7"];
/// Summands per sector in the auxiliary form: four neutrino, three per charged sector.
pub const AUX_SUMMANDS: usize = 25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassData {
    pub charged_masses: [f64; 3],
    pub neutrino_masses: [f64; 3],
    pub tau_reg: f64,
    pub m: f64,
}

impl MassData {
    pub fn validate(&self) -> Result<()> {
        if self
            .charged_masses
            .iter()
            .any(|&m| !(m >= 0.0) || !m.is_finite())
        {
            return Err(Error::Config("charged masses must be non-negative".into()));
        }
        if self
            .neutrino_masses
            .iter()
            .any(|&m| !(m >= 0.0) || !m.is_finite())
        {
            return Err(Error::Config("neutrino masses must be non-negative".into()));
        }
        if self.neutrino_masses.iter().all(|&m| m == 0.0) {
            return Err(Error::Config(
                "at most two neutrino masses may vanish".into(),
            ));
        }
        if !(self.tau_reg > 0.0 && self.tau_reg <= 1.0) {
            return Err(Error::Config(format!(
                "tau_reg must lie in (0, 1], got {}",
                self.tau_reg
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VacuumOptions {
    /// Apply the chiral factor to the neutrino sector; `false` uses the identity.
    pub chiral: bool,
}

impl Default for VacuumOptions {
    fn default() -> Self {
        VacuumOptions { chiral: true }
    }
}

/// `X = chi_L + tau chi_R` and its conjugate `gamma0 X^dagger gamma0 = chi_R + tau chi_L`.
pub fn neutrino_chiral_factor(tau_reg: f64) -> (Mat4, Mat4) {
    let g = GammaSet::dirac();
    let t = Complex64::new(tau_reg, 0.0);
    (
        g.chi_left() + g.chi_right() * t,
        g.chi_right() + g.chi_left() * t,
    )
}

fn generation_sum(masses: &[f64], lattice: &LatticeSpec) -> Result<SectorKernel> {
    let mut acc = SectorKernel::zero(*lattice);
    for &m in masses {
        acc = acc.add(&sea_kernel(m, lattice)?)?;
    }
    Ok(acc)
}

/// Eight sector kernels: the chirally modified neutrino sea followed by seven
/// copies of the charged sea.
pub fn build_vacuum_direct(
    md: &MassData,
    lattice: &LatticeSpec,
    opts: &VacuumOptions,
) -> Result<Vec<SectorKernel>> {
    md.validate()?;
    lattice.validate()?;
    let mut neutrino = generation_sum(&md.neutrino_masses, lattice)?;
    if opts.chiral {
        let (x, xbar) = neutrino_chiral_factor(md.tau_reg);
        neutrino = neutrino.sandwich(&x, &xbar);
    }
    let charged = generation_sum(&md.charged_masses, lattice)?;
    let mut out = Vec::with_capacity(8);
    out.push(neutrino);
    out.extend(std::iter::repeat_n(charged, 7));
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct AuxSummand {
    pub sector: usize,
    /// 0..3, or 3 for the explicitly zero right-handed neutrino slot.
    pub generation: usize,
    pub mass: f64,
    pub kernel: SectorKernel,
}

/// The 25 summands before the sectorial sum, in block order.
pub fn build_vacuum_aux(md: &MassData, lattice: &LatticeSpec) -> Result<Vec<AuxSummand>> {
    md.validate()?;
    lattice.validate()?;
    let mut out = Vec::with_capacity(AUX_SUMMANDS);
    for (gen, &m) in md.neutrino_masses.iter().enumerate() {
        out.push(AuxSummand {
            sector: 0,
            generation: gen,
            mass: m,
            kernel: sea_kernel(m, lattice)?,
        });
    }
    out.push(AuxSummand {
        sector: 0,
        generation: 3,
        mass: 0.0,
        kernel: SectorKernel::zero(*lattice),
    });
    let charged: Vec<SectorKernel> = md
        .charged_masses
        .iter()
        .map(|&m| sea_kernel(m, lattice))
        .collect::<Result<_>>()?;
    for sector in 1..8 {
        for (gen, &m) in md.charged_masses.iter().enumerate() {
            out.push(AuxSummand {
                sector,
                generation: gen,
                mass: m,
                kernel: charged[gen].clone(),
            });
        }
    }
    Ok(out)
}

/// Block-diagonal operator on the 25 auxiliary summands.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator {
    pub blocks: Vec<Mat4>,
}

impl BlockOperator {
    pub fn compose(&self, other: &BlockOperator) -> BlockOperator {
        BlockOperator {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &BlockOperator) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| crate::gamma::max_abs(&(a - b)))
            .fold(0.0, f64::max)
    }
}

/// Identity on every summand except `tau chi_R` on the fourth neutrino summand.
pub fn chiral_asymmetry(tau_reg: f64) -> Result<BlockOperator> {
    if !(tau_reg > 0.0 && tau_reg <= 1.0) {
        return Err(Error::Domain(format!(
            "tau_reg must lie in (0, 1], got {tau_reg}"
        )));
    }
    let mut blocks = vec![Mat4::identity(); AUX_SUMMANDS];
    blocks[3] = GammaSet::dirac().chi_right() * Complex64::new(tau_reg, 0.0);
    Ok(BlockOperator { blocks })
}

/// `diag(m~1, m~2, m~3, 0)` followed by seven copies of `diag(m1, m2, m3)`.
pub fn mass_matrix(md: &MassData) -> Result<BlockOperator> {
    md.validate()?;
    let scalar = |m: f64| Mat4::identity() * Complex64::new(m, 0.0);
    let mut blocks: Vec<Mat4> = md.neutrino_masses.iter().map(|&m| scalar(m)).collect();
    blocks.push(Mat4::zeros());
    for _ in 1..8 {
        blocks.extend(md.charged_masses.iter().map(|&m| scalar(m)));
    }
    Ok(BlockOperator { blocks })
}

/// Kernel with octonion-valued coefficients: `e0` carries the neutrino sector.
#[derive(Debug, Clone, PartialEq)]
pub struct OctonionKernel {
    pub neutrino: SectorKernel,
    pub charged: [SectorKernel; 7],
}

impl OctonionKernel {
    pub fn coefficient(&self, i: usize) -> &SectorKernel {
        if i == 0 {
            &self.neutrino
        } else {
            &self.charged[i - 1]
        }
    }
}

pub fn to_octonionic(direct: &[SectorKernel]) -> Result<OctonionKernel> {
    if direct.len() != 8 {
        return Err(Error::Domain(format!(
            "expected 8 sectors, got {}",
            direct.len()
        )));
    }
    let charged: [SectorKernel; 7] = std::array::from_fn(|i| direct[i + 1].clone());
    Ok(OctonionKernel {
        neutrino: direct[0].clone(),
        charged,
    })
}

pub fn to_direct(ok: &OctonionKernel) -> Vec<SectorKernel> {
    (0..8).map(|i| ok.coefficient(i).clone()).collect()
}

/// New coefficient vector `op * old` at every displacement.
pub fn left_algebra_action(op: &End8, ok: &OctonionKernel) -> OctonionKernel {
    let lattice = ok.neutrino.lattice;
    let n = lattice.num_displacements();
    let mut out: Vec<SectorKernel> = Vec::with_capacity(8);
    for i in 0..8 {
        let mut values = vec![Mat4::zeros(); n];
        let mut modes: Vec<Mode> = Vec::new();
        let mut masses = Vec::new();
        for j in 0..8 {
            let c = op.matrix[(i, j)];
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let src = ok.coefficient(j);
            for (v, s) in values.iter_mut().zip(&src.values) {
                *v += s * c;
            }
            modes.extend(src.modes.iter().map(|m| Mode {
                k: m.k,
                matrix: m.matrix * c,
            }));
            masses.extend_from_slice(&src.masses);
        }
        out.push(SectorKernel {
            lattice,
            masses,
            modes,
            values,
        });
    }
    to_octonionic(&out).expect("eight sectors")
}
