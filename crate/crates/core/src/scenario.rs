//! Physical scenario chain: inputs to gain scales, the axon preset, the
//! slippage inequality, and parameter sweeps.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::mixing::{linearized_polarization, PolarizationResult, DEFAULT_DELTA_W};
use crate::rotor::RigidRotor;
use crate::scaling::{GainCoefficients, SystemParams};

/// `l_s / l_b` above this value is reported as slippage-dominated.
pub const SLIPPAGE_DOMINATED_RATIO: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Concentration {
    /// Ion number density [m^-3].
    Density(f64),
    /// Ion count in a volume [m^3].
    Count { n_ions: f64, volume: f64 },
}

impl Concentration {
    pub fn rho(&self) -> Result<f64> {
        match *self {
            Self::Density(rho) => require_positive("rho", rho),
            Self::Count { n_ions, volume } => {
                require_positive("n_ions", n_ions)?;
                require_positive("volume", volume)?;
                Ok(n_ions / volume)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarizationSource {
    /// Static field [V/m] through the linear response.
    Field(f64),
    /// `P_z` given directly.
    Override(f64),
}

impl PolarizationSource {
    pub fn p_z(&self) -> Result<f64> {
        match *self {
            Self::Field(e) => linearized_polarization(e),
            Self::Override(p) => Ok(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalInputs {
    pub temperature: f64,
    pub n_waters: u32,
    pub polarization: PolarizationSource,
    pub concentration: Concentration,
    pub delta_w: f64,
}

/// Every intermediate of the physical chain, SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedChain {
    pub moment_of_inertia: f64,
    pub splitting: f64,
    pub wavenumber_per_cm: f64,
    pub omega_c: f64,
    pub wavelength: f64,
    pub d0: f64,
    pub d0_tilde: f64,
    pub reduced_splitting: f64,
    /// `(n/2) tanh(E / 2 k_B T)`
    pub delta_n_thermal: f64,
    pub p_z: f64,
    pub w_plus: f64,
    pub w_minus: f64,
    /// `n delta_w`, the imbalance that drives the gain.
    pub delta_n_bar: f64,
    pub rho: f64,
    pub gain: GainCoefficients,
}

impl DerivedChain {
    pub fn system_params(&self, inputs: &PhysicalInputs, rotor: RigidRotor) -> Result<SystemParams> {
        SystemParams::new(inputs.n_waters, self.delta_n_bar, self.rho, self.p_z, rotor)
    }
}

/// Rotor, polarization, inversion, gain coefficients and saturation scales.
pub fn derive_chain(inputs: &PhysicalInputs, rotor: &RigidRotor) -> Result<DerivedChain> {
    let thermal = rotor.thermal_inversion(inputs.n_waters, inputs.temperature)?;
    let p_z = inputs.polarization.p_z()?;
    let pol = PolarizationResult::new(p_z, inputs.delta_w, inputs.n_waters)?;
    let rho = inputs.concentration.rho()?;
    let params = SystemParams::new(inputs.n_waters, pol.delta_n_bar, rho, p_z, *rotor)?;
    let gain = GainCoefficients::for_system(&params)?;
    Ok(DerivedChain {
        moment_of_inertia: rotor.moment_of_inertia,
        splitting: rotor.splitting,
        wavenumber_per_cm: rotor.wavenumber_per_cm(),
        omega_c: rotor.omega_c,
        wavelength: rotor.wavelength,
        d0: rotor.d0,
        d0_tilde: rotor.d0_tilde,
        reduced_splitting: thermal.reduced_splitting,
        delta_n_thermal: thermal.delta_n,
        p_z,
        w_plus: pol.w_plus,
        w_minus: pol.w_minus,
        delta_n_bar: pol.delta_n_bar,
        rho,
        gain,
    })
}

/// Myelinated-axon geometry with a static field along the axon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxonPreset {
    /// Axon diameter [m].
    pub l_a: f64,
    /// Length of one node region [m].
    pub l_r: f64,
    pub total_ions: f64,
    /// Sheaths the ions are shared between.
    pub n_sheaths: f64,
    /// [V/m]
    pub e0z: f64,
    /// Ion velocity [m/s].
    pub v: f64,
    pub temperature: f64,
    pub n_waters: u32,
}

impl Default for AxonPreset {
    fn default() -> Self {
        Self {
            l_a: 10e-6,
            l_r: 1e-3,
            total_ions: 1e6,
            n_sheaths: 100.0,
            e0z: 100.0,
            v: 150.0,
            temperature: 300.0,
            n_waters: 30,
        }
    }
}

impl AxonPreset {
    /// `pi l_a^2 l_r / 4`
    pub fn volume(&self) -> f64 {
        PI * self.l_a * self.l_a * self.l_r / 4.0
    }

    pub fn ions_per_sheath(&self) -> f64 {
        self.total_ions / self.n_sheaths
    }

    pub fn rho(&self) -> f64 {
        self.ions_per_sheath() / self.volume()
    }

    /// Time for an ion to cross `l_r` [s].
    pub fn transit_time(&self) -> f64 {
        self.l_r / self.v
    }

    pub fn inputs(&self) -> PhysicalInputs {
        PhysicalInputs {
            temperature: self.temperature,
            n_waters: self.n_waters,
            polarization: PolarizationSource::Field(self.e0z),
            concentration: Concentration::Count {
                n_ions: self.ions_per_sheath(),
                volume: self.volume(),
            },
            delta_w: DEFAULT_DELTA_W,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlippageDiagnostic {
    pub l_b: f64,
    pub l_g: f64,
    pub v: f64,
    /// `(c - v) l_g / v`
    pub l_s: f64,
    /// `l_s / l_b`
    pub ratio: f64,
    pub slippage_dominated: bool,
}

impl SlippageDiagnostic {
    pub fn verdict(&self) -> &'static str {
        if self.slippage_dominated {
            "slippage-dominated (superradiance scenario abandoned)"
        } else {
            "bunch long compared with slippage"
        }
    }
}

pub fn slippage_check(l_b: f64, l_g: f64, v: f64, c: f64) -> Result<SlippageDiagnostic> {
    require_positive("bunch_length", l_b)?;
    require_positive("gain_length", l_g)?;
    require_positive("velocity", v)?;
    if v >= c {
        return Err(Error::InvalidParameter {
            name: "velocity",
            value: v,
            reason: "must be below the speed of light",
        });
    }
    let l_s = (c - v) * l_g / v;
    let ratio = l_s / l_b;
    Ok(SlippageDiagnostic {
        l_b,
        l_g,
        v,
        l_s,
        ratio,
        slippage_dominated: ratio > SLIPPAGE_DOMINATED_RATIO,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub rho: f64,
    pub p_z: f64,
    pub a_sat: f64,
    pub t_gain: f64,
}

/// Saturation scales on the grid `rhos x p_zs`, `rho` varying slowest.
pub fn sweep(rhos: &[f64], p_zs: &[f64], base: &SystemParams) -> Result<Vec<SweepRow>> {
    for &rho in rhos {
        require_positive("rho", rho)?;
    }
    for &p in p_zs {
        require_positive("p_z", p)?;
    }
    let points: Vec<(f64, f64)> = rhos
        .iter()
        .flat_map(|&r| p_zs.iter().map(move |&p| (r, p)))
        .collect();
    let eval = |&(rho, p_z): &(f64, f64)| -> Result<SweepRow> {
        let params = base.with_rho(rho).with_polarization(p_z);
        let g = GainCoefficients::for_system(&params)?;
        Ok(SweepRow {
            rho,
            p_z,
            a_sat: g.a_sat,
            t_gain: g.t_gain,
        })
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        points.par_iter().map(eval).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        points.iter().map(eval).collect()
    }
}
