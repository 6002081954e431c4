//! Lattice-regularized Dirac seas and the eight-sector vacuum.

pub mod container;
pub mod correlation;
pub mod lattice;
pub mod residual;
pub mod sectors;

pub use correlation::{local_correlation, local_correlation_octonionic, Occupation};
pub use lattice::{sea_kernel, Dims, LatticeSpec, Mode, SectorKernel};
pub use residual::{convergence, dirac_residual, DiracResidual};
pub use sectors::{
    build_vacuum_aux, build_vacuum_direct, chiral_asymmetry, left_algebra_action, mass_matrix,
    to_direct, to_octonionic, MassData, OctonionKernel, VacuumOptions,
};
