//! Physical constants.
//!
//! Values are the CODATA 2018 recommended values (exact where the 2019 SI
//! redefinition fixes them): NIST Special Publication 961, May 2019.

use serde::{Deserialize, Serialize};

/// One angstrom in metres.
pub const ANGSTROM: f64 = 1.0e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant [J s].
    pub hbar: f64,
    /// Speed of light in vacuum [m/s].
    pub c: f64,
    /// Boltzmann constant [J/K].
    pub k_b: f64,
    /// Proton mass [kg].
    pub m_p: f64,
    /// Elementary charge [C].
    pub e_charge: f64,
    /// Vacuum permeability [N/A^2]. Water is treated as non-magnetic.
    pub mu0: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: Self = Self {
        hbar: 1.054_571_817e-34,
        c: 299_792_458.0,
        k_b: 1.380_649e-23,
        m_p: 1.672_621_923_69e-27,
        e_charge: 1.602_176_634e-19,
        mu0: 1.256_637_062_12e-6,
    };

    pub fn all_positive(&self) -> bool {
        [self.hbar, self.c, self.k_b, self.m_p, self.e_charge, self.mu0]
            .iter()
            .all(|v| *v > 0.0 && v.is_finite())
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}
