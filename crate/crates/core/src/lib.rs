//! Numerical laboratory for the relativistic hydrogen atom.
//!
//! Closed-form spectra, exact radial states, finite-difference operator
//! matrices on a fixed-`j` sector, and checks of the SO(4) symmetry generated
//! by the angular momentum and the Johnson–Lippmann operator.

pub mod angular;
pub mod breaking;
pub mod constants;
pub mod diagram;
pub mod error;
pub mod oplab;
pub mod quadrature;
pub mod radial;
pub mod spectra;

pub use angular::{AngularSector, Channel, HalfInteger};
pub use constants::PhysicalConstants;
pub use error::{Error, Result};
pub use spectra::{KappaSign, MonopoleQuantumNumbers, QuantumNumbers};
