//! Majorana-representation Dirac matrices and the Dirac equation with scalar
//! and pseudoscalar mass terms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::gamma::{max_abs, GammaSet, Mat4};
use crate::vacuum::lattice::{LatticeSpec, Mode, SectorKernel};
use crate::vacuum::residual::lattice_operator_residual;
use crate::{Error, Result};

pub fn gamma_majorana() -> GammaSet {
    GammaSet::majorana()
}

/// Which mass factor multiplies the operator `k-slash + i gamma5 n - m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `k-slash + gamma5 n + m`
    Printed,
    /// `k-slash + i gamma5 n + m`
    Derived,
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(Variant::Printed),
            "derived" => Ok(Variant::Derived),
            _ => Err(Error::Config(format!("unknown variant {s:?}"))),
        }
    }
}

fn max_imag(m: &Mat4) -> f64 {
    m.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct RealityReport {
    /// Max `|Im|` over the entries of `i gamma^0..3` and `i gamma5`.
    pub majorana_max_imag: [f64; 5],
    /// Max `|Im|` over the constant part `i gamma5 n - m` of the operator.
    pub operator_constant_max_imag: f64,
    /// True when every coefficient of the operator is real.
    pub maps_real_to_real: bool,
    /// The same five numbers in the Dirac representation.
    pub dirac_max_imag: [f64; 5],
}

fn i_gamma_imag(g: &GammaSet) -> [f64; 5] {
    let i = Complex64::new(0.0, 1.0);
    [
        max_imag(&(g.gamma[0] * i)),
        max_imag(&(g.gamma[1] * i)),
        max_imag(&(g.gamma[2] * i)),
        max_imag(&(g.gamma[3] * i)),
        max_imag(&(g.gamma5 * i)),
    ]
}

pub fn reality_check(m: f64, n: f64) -> RealityReport {
    let g = gamma_majorana();
    let majorana_max_imag = i_gamma_imag(&g);
    let constant = g.gamma5 * Complex64::new(0.0, n) - Mat4::identity() * Complex64::new(m, 0.0);
    let operator_constant_max_imag = max_imag(&constant);
    let maps_real_to_real =
        majorana_max_imag.iter().all(|&v| v == 0.0) && operator_constant_max_imag == 0.0;
    RealityReport {
        majorana_max_imag,
        operator_constant_max_imag,
        maps_real_to_real,
        dirac_max_imag: i_gamma_imag(&GammaSet::dirac()),
    }
}

/// `k-slash + i gamma5 n - m`
pub fn operator(g: &GammaSet, k: [f64; 4], m: f64, n: f64) -> Mat4 {
    g.slash(k) + g.gamma5 * Complex64::new(0.0, n) - Mat4::identity() * Complex64::new(m, 0.0)
}

pub fn mass_factor(g: &GammaSet, k: [f64; 4], m: f64, n: f64, variant: Variant) -> Mat4 {
    let pseudo = match variant {
        Variant::Printed => Complex64::new(n, 0.0),
        Variant::Derived => Complex64::new(0.0, n),
    };
    g.slash(k) + g.gamma5 * pseudo + Mat4::identity() * Complex64::new(m, 0.0)
}

/// `Op(k) F(k)` in the Majorana representation.
pub fn momentum_residual(k: [f64; 4], m: f64, n: f64, variant: Variant) -> Mat4 {
    let g = gamma_majorana();
    operator(&g, k, m, n) * mass_factor(&g, k, m, n, variant)
}

fn minkowski_square(k: [f64; 4]) -> f64 {
    k[0] * k[0] - k[1] * k[1] - k[2] * k[2] - k[3] * k[3]
}

/// Max entry of `Op(k) F(k) - (k^2 - n^2 - m^2) I`.
pub fn factorization_defect(k: [f64; 4], m: f64, n: f64, variant: Variant) -> f64 {
    let expected = Mat4::identity() * Complex64::new(minkowski_square(k) - n * n - m * m, 0.0);
    max_abs(&(momentum_residual(k, m, n, variant) - expected))
}

/// Both energy signs of every grid momentum on the shell `k^2 = m^2 + n^2`,
/// weighted by `exp(-eps omega) / (2 omega V)`.
pub fn shell_modes(
    g: &GammaSet,
    lattice: &LatticeSpec,
    m: f64,
    n: f64,
    variant: Variant,
) -> Vec<Mode> {
    let vol = lattice.volume();
    let mut out = Vec::new();
    for p in lattice.momenta() {
        let omega = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + m * m + n * n).sqrt();
        if omega < 1e-14 {
            continue;
        }
        let w = Complex64::new((-lattice.epsilon * omega).exp() / (2.0 * omega * vol), 0.0);
        for sign in [-1.0, 1.0] {
            let k = [sign * omega, p[0], p[1], p[2]];
            out.push(Mode {
                k,
                matrix: mass_factor(g, k, m, n, variant) * w,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct PmResidual {
    pub variant: Variant,
    /// Max over modes of `|Op(k) M_k|`.
    pub momentum: f64,
    /// Lattice operator applied to the position-space kernel.
    pub lattice: f64,
    pub kernel_max_abs: f64,
    pub kernel_max_imag: f64,
    pub kernel_max_real: f64,
}

pub fn p_m_kernel(
    lattice: &LatticeSpec,
    m: f64,
    n: f64,
    variant: Variant,
) -> Result<(SectorKernel, PmResidual)> {
    lattice.validate()?;
    if !(m * m + n * n > 0.0) || !m.is_finite() || !n.is_finite() {
        return Err(Error::Domain(format!(
            "need m^2 + n^2 > 0, got m = {m}, n = {n}"
        )));
    }
    let g = gamma_majorana();
    let modes = shell_modes(&g, lattice, m, n, variant);
    let momentum = modes
        .iter()
        .map(|md| max_abs(&(operator(&g, md.k, m, n) * md.matrix)))
        .fold(0.0, f64::max);
    let kernel = SectorKernel::from_modes(*lattice, vec![m], modes);
    let constant = g.gamma5 * Complex64::new(0.0, n) - Mat4::identity() * Complex64::new(m, 0.0);
    let lattice_res = lattice_operator_residual(&kernel, &g, &constant);
    let kernel_max_imag = kernel.values.iter().map(max_imag).fold(0.0, f64::max);
    let kernel_max_real = kernel
        .values
        .iter()
        .map(|v| v.iter().map(|z| z.re.abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    let report = PmResidual {
        variant,
        momentum,
        lattice: lattice_res,
        kernel_max_abs: kernel.max_abs(),
        kernel_max_imag,
        kernel_max_real,
    };
    Ok((kernel, report))
}
