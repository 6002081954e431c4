use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gamma::{max_abs, GammaSet, Mat4};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dims {
    #[serde(rename = "1+1")]
    D1p1,
    #[serde(rename = "1+3")]
    D1p3,
}

impl Dims {
    pub fn spatial(self) -> usize {
        match self {
            Dims::D1p1 => 1,
            Dims::D1p3 => 3,
        }
    }
}

/// Space is periodic with `l` sites per direction; relative times run over
/// `-(t-1)..=(t-1)` slices without wrap-around.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub l: usize,
    pub t: usize,
    pub a: f64,
    pub epsilon: f64,
    pub dims: Dims,
}

impl LatticeSpec {
    pub fn new(l: usize, t: usize, a: f64, epsilon: f64, dims: Dims) -> Result<Self> {
        let spec = LatticeSpec {
            l,
            t,
            a,
            epsilon,
            dims,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 2 || self.l % 2 != 0 {
            return Err(Error::Config(format!(
                "L must be even and positive, got {}",
                self.l
            )));
        }
        if self.t == 0 {
            return Err(Error::Config("T must be positive".into()));
        }
        if !(self.a > 0.0) || !self.a.is_finite() {
            return Err(Error::Config(format!(
                "spacing must be positive, got {}",
                self.a
            )));
        }
        if !(self.epsilon >= self.a) || !self.epsilon.is_finite() {
            return Err(Error::Config(format!(
                "cutoff epsilon = {} must be at least the spacing {}",
                self.epsilon, self.a
            )));
        }
        Ok(())
    }

    /// Same physical box with half the spacing.
    pub fn refined(&self) -> Self {
        LatticeSpec {
            l: 2 * self.l,
            t: 2 * self.t,
            a: self.a / 2.0,
            ..*self
        }
    }

    pub fn spatial_sites(&self) -> usize {
        self.l.pow(self.dims.spatial() as u32)
    }

    pub fn volume(&self) -> f64 {
        (self.l as f64 * self.a).powi(self.dims.spatial() as i32)
    }

    pub fn time_extent(&self) -> usize {
        2 * self.t - 1
    }

    pub fn num_displacements(&self) -> usize {
        self.time_extent() * self.spatial_sites()
    }

    /// Grid 3-momenta `2 pi n / (L a)` with `n` in `[-L/2, L/2)`; unused components are zero.
    pub fn momenta(&self) -> Vec<[f64; 3]> {
        let d = self.dims.spatial();
        let l = self.l as i64;
        let unit = 2.0 * PI / (self.l as f64 * self.a);
        let range: Vec<f64> = (-l / 2..l / 2).map(|n| n as f64 * unit).collect();
        let mut out = Vec::with_capacity(self.spatial_sites());
        for i in 0..self.spatial_sites() {
            let mut k = [0.0; 3];
            let mut rest = i;
            for kc in k.iter_mut().take(d) {
                *kc = range[rest % self.l];
                rest /= self.l;
            }
            out.push(k);
        }
        out
    }

    /// Flat index of the displacement `(dt, dx)`; `dx` is reduced modulo `L`.
    pub fn index(&self, dt: i64, dx: [i64; 3]) -> Option<usize> {
        let tmax = self.t as i64 - 1;
        if dt < -tmax || dt > tmax {
            return None;
        }
        let l = self.l as i64;
        let mut spatial = 0usize;
        let mut stride = 1usize;
        for c in dx.iter().take(self.dims.spatial()) {
            spatial += (c.rem_euclid(l) as usize) * stride;
            stride *= self.l;
        }
        Some((dt + tmax) as usize * self.spatial_sites() + spatial)
    }

    /// Inverse of [`index`](Self::index), with spatial components in `0..L`.
    pub fn displacement(&self, index: usize) -> (i64, [i64; 3]) {
        let sites = self.spatial_sites();
        let dt = (index / sites) as i64 - (self.t as i64 - 1);
        let mut rest = index % sites;
        let mut dx = [0i64; 3];
        for c in dx.iter_mut().take(self.dims.spatial()) {
            *c = (rest % self.l) as i64;
            rest /= self.l;
        }
        (dt, dx)
    }
}

/// One plane-wave term `matrix * exp(-i k.xi)` of a kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    /// Contravariant `(k^0, k^1, k^2, k^3)`.
    pub k: [f64; 4],
    pub matrix: Mat4,
}

impl Mode {
    /// `exp(-i k.xi)` with the Minkowski product.
    pub fn phase(&self, xi: [f64; 4]) -> Complex64 {
        let dot = self.k[0] * xi[0] - self.k[1] * xi[1] - self.k[2] * xi[2] - self.k[3] * xi[3];
        Complex64::from_polar(1.0, -dot)
    }
}

/// Translation-invariant spinor kernel `K(x, y) = K(x - y)` on the lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorKernel {
    pub lattice: LatticeSpec,
    /// Masses of the summed seas (one per generation).
    pub masses: Vec<f64>,
    pub modes: Vec<Mode>,
    pub values: Vec<Mat4>,
}

pub(crate) fn physical(lattice: &LatticeSpec, dt: i64, dx: [i64; 3]) -> [f64; 4] {
    let a = lattice.a;
    [
        dt as f64 * a,
        dx[0] as f64 * a,
        dx[1] as f64 * a,
        dx[2] as f64 * a,
    ]
}

impl SectorKernel {
    pub fn zero(lattice: LatticeSpec) -> Self {
        SectorKernel {
            lattice,
            masses: Vec::new(),
            modes: Vec::new(),
            values: vec![Mat4::zeros(); lattice.num_displacements()],
        }
    }

    /// Sum the modes at every displacement; parallel over displacements, serial over modes.
    pub fn from_modes(lattice: LatticeSpec, masses: Vec<f64>, modes: Vec<Mode>) -> Self {
        let values = (0..lattice.num_displacements())
            .into_par_iter()
            .map(|i| {
                let (dt, dx) = lattice.displacement(i);
                let xi = physical(&lattice, dt, dx);
                let mut acc = Mat4::zeros();
                for m in &modes {
                    acc += m.matrix * m.phase(xi);
                }
                acc
            })
            .collect();
        SectorKernel {
            lattice,
            masses,
            modes,
            values,
        }
    }

    pub fn get(&self, dt: i64, dx: [i64; 3]) -> Option<&Mat4> {
        self.lattice.index(dt, dx).map(|i| &self.values[i])
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|m| max_abs(m) == 0.0)
    }

    pub fn max_abs_diff(&self, other: &SectorKernel) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| max_abs(&(a - b)))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(max_abs).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &SectorKernel) -> Result<SectorKernel> {
        if self.lattice != other.lattice {
            return Err(Error::Domain("kernels live on different lattices".into()));
        }
        let mut masses = self.masses.clone();
        masses.extend_from_slice(&other.masses);
        let mut modes = self.modes.clone();
        modes.extend_from_slice(&other.modes);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(SectorKernel {
            lattice: self.lattice,
            masses,
            modes,
            values,
        })
    }

    pub fn scale(&self, c: Complex64) -> SectorKernel {
        SectorKernel {
            lattice: self.lattice,
            masses: self.masses.clone(),
            modes: self
                .modes
                .iter()
                .map(|m| Mode {
                    k: m.k,
                    matrix: m.matrix * c,
                })
                .collect(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// `left * K * right` at every displacement and on every mode.
    pub fn sandwich(&self, left: &Mat4, right: &Mat4) -> SectorKernel {
        SectorKernel {
            lattice: self.lattice,
            masses: self.masses.clone(),
            modes: self
                .modes
                .iter()
                .map(|m| Mode {
                    k: m.k,
                    matrix: left * m.matrix * right,
                })
                .collect(),
            values: self.values.iter().map(|v| left * v * right).collect(),
        }
    }

    /// Max over displacements of `|gamma0 K(-xi)^dagger gamma0 - K(xi)|`.
    pub fn gamma0_symmetry_residual(&self) -> f64 {
        let g0 = GammaSet::dirac().gamma[0];
        (0..self.values.len())
            .map(|i| {
                let (dt, dx) = self.lattice.displacement(i);
                let j = self
                    .lattice
                    .index(-dt, [-dx[0], -dx[1], -dx[2]])
                    .expect("time range is symmetric");
                max_abs(&(g0 * self.values[j].adjoint() * g0 - self.values[i]))
            })
            .fold(0.0, f64::max)
    }
}

/// Negative-energy modes `(k-slash + m) / (2 omega) * exp(-eps omega) / V` with `k^0 = -omega`.
/// The massless zero mode has no direction and is left out.
pub fn sea_modes(mass: f64, lattice: &LatticeSpec) -> Vec<Mode> {
    let g = GammaSet::dirac();
    let vol = lattice.volume();
    lattice
        .momenta()
        .into_iter()
        .filter_map(|p| {
            let omega = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + mass * mass).sqrt();
            if omega < 1e-14 {
                return None;
            }
            let k = [-omega, p[0], p[1], p[2]];
            let weight = (-lattice.epsilon * omega).exp() / (2.0 * omega * vol);
            let matrix = (g.slash(k) + Mat4::identity() * Complex64::new(mass, 0.0))
                * Complex64::new(weight, 0.0);
            Some(Mode { k, matrix })
        })
        .collect()
}

pub fn sea_kernel(mass: f64, lattice: &LatticeSpec) -> Result<SectorKernel> {
    if !(mass >= 0.0) || !mass.is_finite() {
        return Err(Error::Domain(format!(
            "mass must be non-negative, got {mass}"
        )));
    }
    lattice.validate()?;
    Ok(SectorKernel::from_modes(
        *lattice,
        vec![mass],
        sea_modes(mass, lattice),
    ))
}

/// Max over modes of `|(k-slash - m) M|`, which vanishes on shell.
pub fn on_shell_residual(kernel: &SectorKernel, mass: f64) -> f64 {
    let g = GammaSet::dirac();
    kernel
        .modes
        .iter()
        .map(|m| {
            max_abs(&((g.slash(m.k) - Mat4::identity() * Complex64::new(mass, 0.0)) * m.matrix))
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> LatticeSpec {
        LatticeSpec::new(8, 4, 0.5, 1.0, Dims::D1p1).unwrap()
    }

    #[test]
    fn lattice_validation() {
        assert!(LatticeSpec::new(7, 4, 0.5, 1.0, Dims::D1p1).is_err());
        assert!(LatticeSpec::new(8, 4, 0.5, 0.1, Dims::D1p1).is_err());
        assert!(LatticeSpec::new(8, 0, 0.5, 1.0, Dims::D1p1).is_err());
    }

    #[test]
    fn index_round_trip() {
        for spec in [
            small(),
            LatticeSpec::new(4, 3, 1.0, 1.0, Dims::D1p3).unwrap(),
        ] {
            for i in 0..spec.num_displacements() {
                let (dt, dx) = spec.displacement(i);
                assert_eq!(spec.index(dt, dx), Some(i));
            }
            assert_eq!(spec.index(spec.t as i64, [0; 3]), None);
        }
    }

    #[test]
    fn modes_are_on_shell() {
        for m in [0.0, 0.7] {
            let k = sea_kernel(m, &small()).unwrap();
            assert!(on_shell_residual(&k, m) < 1e-15);
        }
    }

    #[test]
    fn gamma0_symmetry() {
        let k = sea_kernel(0.3, &small()).unwrap();
        assert!(k.gamma0_symmetry_residual() < 1e-12);
    }

    #[test]
    fn massless_trace_matches_closed_form() {
        // tr(gamma0 K(x, x)) = -2 sum_{n != 0} exp(-eps |k_n|) / (L a)
        let spec = LatticeSpec::new(4, 1, 1.0, 1.0, Dims::D1p1).unwrap();
        let k = sea_kernel(0.0, &spec).unwrap();
        let g0 = GammaSet::dirac().gamma[0];
        let tr = (g0 * k.get(0, [0; 3]).unwrap()).trace();
        let len = spec.l as f64 * spec.a;
        let q = (-spec.epsilon * 2.0 * PI / len).exp();
        let half = (spec.l / 2) as i32;
        let geometric = q * (1.0 - q.powi(half - 1)) / (1.0 - q);
        let expected = (-4.0 * geometric - 2.0 * q.powi(half)) / len;
        assert!((tr.re - expected).abs() < 1e-14, "{tr} vs {expected}");
        assert!(tr.im.abs() < 1e-15);
    }

    #[test]
    fn regularization_is_monotone() {
        let spec = small();
        let loose = LatticeSpec {
            epsilon: 2.0,
            ..spec
        };
        let a = sea_modes(0.5, &spec);
        let b = sea_modes(0.5, &loose);
        for (m, n) in a.iter().zip(&b) {
            assert!(max_abs(&m.matrix) > max_abs(&n.matrix));
        }
    }
}
