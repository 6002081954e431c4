//! Octonionic multiplication algebras, minimal left ideals, and finite
//! causal fermion systems.

pub mod cfs;
pub mod error;
pub mod experiment;
pub mod gamma;
pub mod majorana;
pub mod mult_algebra;
pub mod octonion;
pub mod potentials;
pub mod vacuum;
pub mod witt;

pub use error::{Error, Result};
