//! Gain coefficients and conversion between physical and scaled units.
//!
//! The coupling coefficients are
//!
//! ```text
//! alpha = sqrt(3) dn w_c d0~ P_z / (n I)
//! beta  = mu c^2 rho dn d0~ P_z / (2 sqrt 3)
//! ```
//!
//! and the scaled field and time are `A0 (alpha / 2 beta^2)^(1/3)` and
//! `t (alpha beta / 2)^(1/3)`. The vector potential is measured in V s / m.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rotor::RigidRotor;

/// Largest permanent polarization, reached at a mixing angle of pi/4.
pub fn max_polarization() -> f64 {
    1.0 / (3.0 * 3.0_f64.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Water molecules per ion.
    pub n: u32,
    /// Population imbalance per ion.
    pub delta_n_bar: f64,
    /// Ion number concentration [m^-3].
    pub rho: f64,
    pub p_z: f64,
    pub rotor: RigidRotor,
    /// Magnetic permeability of the medium [N/A^2].
    pub mu: f64,
}

impl SystemParams {
    /// Parameters with `mu = mu0` taken from the rotor's constants.
    pub fn new(n: u32, delta_n_bar: f64, rho: f64, p_z: f64, rotor: RigidRotor) -> Result<Self> {
        let params = Self {
            n,
            delta_n_bar,
            rho,
            p_z,
            rotor,
            mu: rotor.constants.mu0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter {
                name: "n_waters",
                value: 0.0,
                reason: "at least one water molecule per ion is required",
            });
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "rho",
                value: self.rho,
                reason: "ion concentration must be finite and strictly positive",
            });
        }
        if !(0.0..=max_polarization()).contains(&self.p_z) {
            return Err(Error::InvalidParameter {
                name: "p_z",
                value: self.p_z,
                reason: "permanent polarization must lie in [0, 1/(3 sqrt 3)]",
            });
        }
        if !(0.0..=f64::from(self.n)).contains(&self.delta_n_bar) {
            return Err(Error::InvalidParameter {
                name: "delta_n_bar",
                value: self.delta_n_bar,
                reason: "population imbalance must lie in [0, n]",
            });
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "mu",
                value: self.mu,
                reason: "permeability must be strictly positive",
            });
        }
        Ok(())
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    pub fn with_polarization(mut self, p_z: f64) -> Self {
        self.p_z = p_z;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainPair {
    pub alpha: f64,
    pub beta: f64,
}

impl GainPair {
    pub fn mechanism_off(&self) -> bool {
        self.alpha == 0.0 || self.beta == 0.0
    }
}

pub fn alpha_beta(params: &SystemParams) -> Result<GainPair> {
    params.validate()?;
    let r = &params.rotor;
    let c = r.constants.c;
    let dipole_ave = r.d0_tilde * params.p_z;
    let sqrt3 = 3.0_f64.sqrt();
    let alpha = sqrt3 * params.delta_n_bar * r.omega_c * dipole_ave
        / (f64::from(params.n) * r.moment_of_inertia);
    let beta = params.mu * c * c * params.rho * params.delta_n_bar * dipole_ave / (2.0 * sqrt3);
    Ok(GainPair { alpha, beta })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainCoefficients {
    pub alpha: f64,
    pub beta: f64,
    /// Vector-potential amplitude at unit scaled amplitude [V s/m].
    pub a_sat: f64,
    /// Gain (dynamical) time [s]; infinite when the mechanism is off.
    pub t_gain: f64,
    /// `A_sat / (rho^(2/3) P_z^(1/3))`
    pub c_a: f64,
    /// `t_gain / (rho^(-1/3) P_z^(-2/3))`
    pub c_t: f64,
    pub mechanism_off: bool,
}

/// Saturation amplitude and gain time from `alpha`, `beta`, with the universal
/// prefactors obtained by dividing out the `rho` and `P_z` powers.
pub fn saturation_scales(gain: GainPair, rho: f64, p_z: f64) -> Result<GainCoefficients> {
    let GainPair { alpha, beta } = gain;
    if !(alpha >= 0.0 && beta >= 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "alpha/beta",
            value: if alpha < 0.0 { alpha } else { beta },
            reason: "gain coefficients must be finite and non-negative",
        });
    }
    if gain.mechanism_off() {
        return Ok(GainCoefficients {
            alpha,
            beta,
            a_sat: 0.0,
            t_gain: f64::INFINITY,
            c_a: f64::NAN,
            c_t: f64::NAN,
            mechanism_off: true,
        });
    }
    let a_sat = (alpha / (2.0 * beta * beta)).powf(-1.0 / 3.0);
    let t_gain = (alpha * beta / 2.0).powf(-1.0 / 3.0);
    Ok(GainCoefficients {
        alpha,
        beta,
        a_sat,
        t_gain,
        c_a: a_sat / (rho.powf(2.0 / 3.0) * p_z.powf(1.0 / 3.0)),
        c_t: t_gain / (rho.powf(-1.0 / 3.0) * p_z.powf(-2.0 / 3.0)),
        mechanism_off: false,
    })
}

impl GainCoefficients {
    /// Full chain from system parameters. When the mechanism is off the
    /// universal prefactors are still reported.
    pub fn for_system(params: &SystemParams) -> Result<Self> {
        let mut coeffs = saturation_scales(alpha_beta(params)?, params.rho, params.p_z)?;
        if coeffs.mechanism_off {
            let (c_a, c_t) = universal_prefactors(params)?;
            coeffs.c_a = c_a;
            coeffs.c_t = c_t;
        }
        Ok(coeffs)
    }

    fn require_active(&self) -> Result<()> {
        if self.mechanism_off || !self.t_gain.is_finite() || self.a_sat <= 0.0 {
            Err(Error::MechanismOff)
        } else {
            Ok(())
        }
    }

    /// `(A0, t)` in physical units to `(scaled amplitude, tau)`.
    pub fn to_dimensionless(&self, a0: f64, t: f64) -> Result<(f64, f64)> {
        self.require_active()?;
        Ok((a0 / self.a_sat, t / self.t_gain))
    }

    pub fn to_physical(&self, amplitude: f64, tau: f64) -> Result<(f64, f64)> {
        self.require_active()?;
        Ok((amplitude * self.a_sat, tau * self.t_gain))
    }
}

/// `(c_A, c_t)`: the saturation amplitude and gain time evaluated at unit
/// concentration and unit polarization.
pub fn universal_prefactors(params: &SystemParams) -> Result<(f64, f64)> {
    let unit = SystemParams {
        rho: 1.0,
        p_z: 1.0,
        ..*params
    };
    // P_z = 1 exceeds the physical range; skip validation for this evaluation.
    let r = &unit.rotor;
    let sqrt3 = 3.0_f64.sqrt();
    let c = r.constants.c;
    let alpha = sqrt3 * unit.delta_n_bar * r.omega_c * r.d0_tilde / (f64::from(unit.n) * r.moment_of_inertia);
    let beta = unit.mu * c * c * unit.delta_n_bar * r.d0_tilde / (2.0 * sqrt3);
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::MechanismOff);
    }
    Ok((
        (alpha / (2.0 * beta * beta)).powf(-1.0 / 3.0),
        (alpha * beta / 2.0).powf(-1.0 / 3.0),
    ))
}
