//! Finite-dimensional causal fermion systems.

pub mod minimize;
pub mod point;
pub mod random;
pub mod spectrum;
pub mod spin;

pub use minimize::{el_report, minimize, AffineFamily, ElReport, MinimizeOptions, MinimizeReport};
pub use point::{validate_point, CMatrix, DiscreteMeasure, OperatorPoint, SystemConfig};
pub use spectrum::{
    action, causal_class, constraints, ell, lagrangian, lagrangian_first_term, product_spectrum,
    CausalClass, ProductSpectrum,
};
pub use spin::{
    closed_chain, closed_chain_deviation, completeness_check, holonomy, kernel,
    physical_wavefunction, spin_connection, spin_product, spin_space, SpinSpace,
};
