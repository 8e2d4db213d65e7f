//! Literal polar-form equations, kept as an independent cross-check.
//!
//! ```text
//! theta_I'' = -2 A0 cos(theta_I + phi)
//! A0'       =  <cos(theta_I + phi)>
//! phi'      = -<sin(theta_I + phi)> / A0
//! ```
//!
//! Serial, allocation-heavy and singular at `A0 = 0`; use the complex-field
//! integrator for production runs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{init_ensemble, EnsembleState, Integrator, SimConfig};
use crate::error::{Error, Result};

/// Polar integration aborts below this amplitude.
pub const SINGULARITY_GUARD: f64 = 1e-9;
/// Comparison stops once the amplitude falls below this value.
pub const COMPARISON_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct PolarState {
    pub theta: Vec<f64>,
    pub p: Vec<f64>,
    pub amplitude: f64,
    pub phase: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarDerivative {
    pub dtheta: Vec<f64>,
    pub dp: Vec<f64>,
    pub damplitude: f64,
    pub dphase: f64,
}

impl PolarState {
    pub fn from_ensemble(state: &EnsembleState) -> Self {
        Self {
            theta: state.particles.iter().map(|q| q.theta).collect(),
            p: state.particles.iter().map(|q| q.p).collect(),
            amplitude: state.amplitude(),
            phase: state.phase(),
            tau: state.tau,
        }
    }

    /// `A0 exp(-i phi)`
    pub fn field(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, -self.phase)
    }

    fn offset(&self, d: &PolarDerivative, c: f64) -> Self {
        Self {
            theta: self.theta.iter().zip(&d.dtheta).map(|(x, k)| x + c * k).collect(),
            p: self.p.iter().zip(&d.dp).map(|(x, k)| x + c * k).collect(),
            amplitude: self.amplitude + c * d.damplitude,
            phase: self.phase + c * d.dphase,
            tau: self.tau,
        }
    }
}

pub fn polar_derivative(state: &PolarState) -> Result<PolarDerivative> {
    if !(state.amplitude.abs() >= SINGULARITY_GUARD) {
        return Err(Error::SingularField {
            amplitude: state.amplitude,
            tau: state.tau,
        });
    }
    let n = state.theta.len() as f64;
    let mut cos_sum = 0.0;
    let mut sin_sum = 0.0;
    let mut dp = Vec::with_capacity(state.theta.len());
    for th in &state.theta {
        let (s, c) = (th + state.phase).sin_cos();
        cos_sum += c;
        sin_sum += s;
        dp.push(-2.0 * state.amplitude * c);
    }
    Ok(PolarDerivative {
        dtheta: state.p.clone(),
        dp,
        damplitude: cos_sum / n,
        dphase: -sin_sum / n / state.amplitude,
    })
}

pub fn polar_step(state: &PolarState, h: f64) -> Result<PolarState> {
    let k1 = polar_derivative(state)?;
    let k2 = polar_derivative(&state.offset(&k1, h / 2.0))?;
    let k3 = polar_derivative(&state.offset(&k2, h / 2.0))?;
    let k4 = polar_derivative(&state.offset(&k3, h))?;
    let comb = |a: f64, b: f64, c: f64, d: f64| (a + 2.0 * b + 2.0 * c + d) * h / 6.0;
    let n = state.theta.len();
    let mut next = state.clone();
    for i in 0..n {
        next.theta[i] += comb(k1.dtheta[i], k2.dtheta[i], k3.dtheta[i], k4.dtheta[i]);
        next.p[i] += comb(k1.dp[i], k2.dp[i], k3.dp[i], k4.dp[i]);
    }
    next.amplitude += comb(k1.damplitude, k2.damplitude, k3.damplitude, k4.damplitude);
    next.phase += comb(k1.dphase, k2.dphase, k3.dphase, k4.dphase);
    next.tau += h;
    Ok(next)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equivalence {
    /// Largest `|A_polar - A_complex|` while `A0 > 1e-6`.
    pub max_field_deviation: f64,
    /// Largest `| |A_polar| - |A_complex| |` over the same steps.
    pub max_amplitude_deviation: f64,
    pub steps_compared: usize,
}

/// Run both formulations from the same initial ensemble and compare fields.
pub fn polar_equivalence(config: &SimConfig) -> Result<Equivalence> {
    let mut complex = init_ensemble(config)?;
    let mut polar = PolarState::from_ensemble(&complex);
    let mut integrator = Integrator::new(complex.len());
    let mut out = Equivalence {
        max_field_deviation: 0.0,
        max_amplitude_deviation: 0.0,
        steps_compared: 0,
    };
    for _ in 0..config.steps() {
        integrator.step(&mut complex, config.dt)?;
        polar = polar_step(&polar, config.dt)?;
        if complex.amplitude() <= COMPARISON_FLOOR {
            break;
        }
        out.max_field_deviation = out
            .max_field_deviation
            .max((polar.field() - complex.field).norm());
        out.max_amplitude_deviation = out
            .max_amplitude_deviation
            .max((polar.amplitude - complex.amplitude()).abs());
        out.steps_compared += 1;
    }
    Ok(out)
}
