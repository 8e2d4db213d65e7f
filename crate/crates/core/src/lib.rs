//! Collective instability of ion-solvated water rotors coupled to one resonant
//! radiation mode.
//!
//! The crate is organised bottom-up:
//!
//! * [`constants`] and [`rotor`]: CODATA constants and the two-level rigid-rotor
//!   model of a water molecule (splitting, resonant wavelength, dipole sizes,
//!   Boltzmann populations).
//! * [`harmonics`]: spherical harmonics and a tensor-product quadrature used as
//!   an oracle for dipole matrix elements.
//! * [`mixing`]: electrostatic mixing of `|0,0>` and `|1,0>` and the resulting
//!   permanent polarization.
//! * [`spin`]: energy-spin algebra, the truncated superradiant states and the
//!   per-molecule ponderomotive coefficient.
//! * [`scaling`]: gain coefficients and the saturation amplitude / gain time.
//! * [`dynamics`]: the N-particle equations of motion in scaled units.
//! * [`scenario`]: scenario configuration, the axon preset, sweeps and the
//!   end-to-end pipeline.

pub mod constants;
pub mod dynamics;
mod error;
pub mod harmonics;
pub mod mixing;
pub mod rotor;
pub mod scaling;
pub mod scenario;
pub mod spin;

pub use error::{Error, Result};
