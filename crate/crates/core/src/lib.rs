//! Wave quanta toolkit.
//!
//! Lattice phonon dynamics and action waves, Wigner phase-space
//! distributions for phonons and photons, the Riemann-Silberstein field and
//! its complex helicity potential, and kinetic relaxation of a photon gas
//! towards the Planck law.
//!
//! Everything is deterministic: no hidden global state, and random test
//! states are always drawn from an explicitly seeded generator.

pub mod em;
pub mod error;
pub mod gridio;
pub mod helicity;
pub mod lattice;
pub mod spectral;
pub mod thermal;
pub mod units;
pub mod wigner;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use units::Units;

pub type Vec3 = nalgebra::Vector3<f64>;
pub type CVec3 = nalgebra::Vector3<Complex64>;
