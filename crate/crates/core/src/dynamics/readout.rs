//! Map a scaled ensemble back to physical units.

use serde::{Deserialize, Serialize};

use super::EnsembleState;
use crate::error::{Error, Result};
use crate::rotor::RigidRotor;
use crate::scaling::GainCoefficients;

/// `max |theta_dot| / omega_c` above this value breaks the slow-phase assumption.
pub const VALIDITY_LIMIT: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalReadout {
    /// Vector-potential amplitude [V s / m].
    pub a0: f64,
    /// Elapsed time [s].
    pub t: f64,
    /// Phase velocity of each ion [rad/s].
    pub theta_dot: Vec<f64>,
    /// Total angular momentum of the solvation shell around each ion [J s].
    pub angular_momentum: Vec<f64>,
    pub max_theta_dot: f64,
    /// `max |theta_dot| / omega_c`
    pub validity_ratio: f64,
    pub warning: Option<String>,
}

/// Physical amplitude, time and per-ion rotation rates.
///
/// The shell angular momentum follows `L = I (n/6) (omega_c + theta_dot)`.
pub fn physical_readout(
    state: &EnsembleState,
    coeffs: &GainCoefficients,
    rotor: &RigidRotor,
    n: u32,
) -> Result<PhysicalReadout> {
    if coeffs.mechanism_off {
        return Err(Error::MechanismOff);
    }
    let (a0, t) = coeffs.to_physical(state.amplitude(), state.tau)?;
    let theta_dot: Vec<f64> = state.particles.iter().map(|q| q.p / coeffs.t_gain).collect();
    let shell = rotor.moment_of_inertia * f64::from(n) / 6.0;
    let angular_momentum = theta_dot.iter().map(|w| shell * (rotor.omega_c + w)).collect();
    let max_theta_dot = theta_dot.iter().fold(0.0_f64, |m, w| m.max(w.abs()));
    let validity_ratio = max_theta_dot / rotor.omega_c;
    let warning = (validity_ratio > VALIDITY_LIMIT).then(|| {
        format!(
            "max |theta_dot| / omega_c = {validity_ratio:.3e} exceeds {VALIDITY_LIMIT:e}; \
             the slow-phase approximation is not reliable"
        )
    });
    Ok(PhysicalReadout {
        a0,
        t,
        theta_dot,
        angular_momentum,
        max_theta_dot,
        validity_ratio,
        warning,
    })
}
