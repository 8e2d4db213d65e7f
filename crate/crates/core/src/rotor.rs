//! Two-level rigid-rotor model of a water molecule.
//!
//! The molecule is a rigid rotor with moment of inertia `2 m_p d_g^2`. Its
//! rotational ladder is `E_l = E l (l + 1) / 2`, where `E = hbar^2 / I` is the
//! splitting between the two lowest levels.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{PhysicalConstants, ANGSTROM};
use crate::error::{require_positive, Error, Result};

/// Geometry length of the water molecule (0.82 Å).
pub const WATER_GEOMETRY_LENGTH: f64 = 0.82 * ANGSTROM;
/// Dipole length of the water molecule (0.2 Å).
pub const WATER_DIPOLE_LENGTH: f64 = 0.2 * ANGSTROM;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidRotor {
    pub constants: PhysicalConstants,
    /// Geometry length [m].
    pub d_g: f64,
    /// Dipole length [m].
    pub d_e: f64,
    /// Average moment of inertia [kg m^2].
    pub moment_of_inertia: f64,
    /// Splitting between the two lowest rotational levels [J].
    pub splitting: f64,
    /// Resonant angular frequency [rad/s].
    pub omega_c: f64,
    /// Resonant wavelength [m].
    pub wavelength: f64,
    /// Permanent dipole `2 e d_e` [C m].
    pub d0: f64,
    /// Transition dipole `d0 sqrt(2/3)` [C m].
    pub d0_tilde: f64,
}

impl RigidRotor {
    pub fn new(constants: PhysicalConstants, d_g: f64, d_e: f64) -> Result<Self> {
        require_positive("d_g", d_g)?;
        require_positive("d_e", d_e)?;
        if !constants.all_positive() {
            return Err(Error::Inconsistent(
                "physical constants must all be strictly positive".into(),
            ));
        }
        let moment_of_inertia = 2.0 * constants.m_p * d_g * d_g;
        let splitting = constants.hbar * constants.hbar / moment_of_inertia;
        let omega_c = splitting / constants.hbar;
        let wavelength = 2.0 * PI * constants.c / omega_c;
        let d0 = 2.0 * constants.e_charge * d_e;
        Ok(Self {
            constants,
            d_g,
            d_e,
            moment_of_inertia,
            splitting,
            omega_c,
            wavelength,
            d0,
            d0_tilde: d0 * (2.0_f64 / 3.0).sqrt(),
        })
    }

    /// Water with CODATA constants and the standard geometry.
    pub fn water() -> Self {
        Self::new(
            PhysicalConstants::CODATA_2018,
            WATER_GEOMETRY_LENGTH,
            WATER_DIPOLE_LENGTH,
        )
        .expect("standard water geometry is valid")
    }

    /// `E / (hbar c)` in cm^-1, i.e. `2 pi / wavelength`.
    pub fn wavenumber_per_cm(&self) -> f64 {
        self.splitting / (self.constants.hbar * self.constants.c) / 100.0
    }

    /// Energy of level `l` relative to the ground state.
    pub fn level_energy(&self, l: i32) -> Result<f64> {
        if l < 0 {
            return Err(Error::QuantumNumbers { l, m: 0 });
        }
        let l = f64::from(l);
        Ok(self.splitting * l * (l + 1.0) / 2.0)
    }

    /// Per-state Boltzmann ratio between a state of level `l` and `|0,0>`.
    ///
    /// No `(2l + 1)` degeneracy weight is applied: the ratio compares single
    /// states, not whole levels.
    pub fn population_ratio(&self, l: i32, temperature: f64) -> Result<f64> {
        require_positive("temperature", temperature)?;
        let energy = self.level_energy(l)?;
        Ok((-energy / (self.constants.k_b * temperature)).exp())
    }

    /// `E / (2 k_B T)`.
    pub fn reduced_splitting(&self, temperature: f64) -> Result<f64> {
        require_positive("temperature", temperature)?;
        Ok(self.splitting / (2.0 * self.constants.k_b * temperature))
    }

    /// Thermal population imbalance `(n/2) tanh(E / 2 k_B T)` between ground and
    /// excited water molecules around one ion.
    pub fn thermal_inversion(&self, n: u32, temperature: f64) -> Result<ThermalInversion> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: 0.0,
                reason: "at least one water molecule per ion is required",
            });
        }
        let x = self.reduced_splitting(temperature)?;
        Ok(ThermalInversion {
            delta_n: f64::from(n) / 2.0 * x.tanh(),
            reduced_splitting: x,
        })
    }

    pub fn thermal_population(
        &self,
        n: u32,
        temperature: f64,
        l_max: u32,
    ) -> Result<ThermalPopulation> {
        let inversion = self.thermal_inversion(n, temperature)?;
        let l_max = i32::try_from(l_max).map_err(|_| Error::QuantumNumbers { l: -1, m: 0 })?;
        let ratios = (0..=l_max)
            .map(|l| self.population_ratio(l, temperature))
            .collect::<Result<Vec<_>>>()?;
        Ok(ThermalPopulation {
            temperature,
            ratios,
            delta_n_thermal: inversion.delta_n,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalInversion {
    pub delta_n: f64,
    /// `E / (2 k_B T)`
    pub reduced_splitting: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalPopulation {
    pub temperature: f64,
    /// `R_l` for `l = 0..=l_max`.
    pub ratios: Vec<f64>,
    pub delta_n_thermal: f64,
}
