//! N-particle collective-instability dynamics in scaled units.
//!
//! Each ion contributes a phase `theta_I` with scaled momentum `p_I = theta_I'`.
//! The radiation mode is carried as the complex amplitude `A = A0 exp(-i phi)`:
//!
//! ```text
//! theta_I'' = -(A exp(-i theta_I) + c.c.) = -2 A0 cos(theta_I + phi)
//! A'        = <exp(i theta_I)>
//! ```
//!
//! This form is regular at `A0 = 0`. The polar form, which divides by `A0`,
//! lives in [`polar`] and is used only as a cross-check.
//!
//! `<p> + |A|^2` is a first integral of the exact flow.

mod integrator;
pub mod polar;
mod readout;
mod summation;

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use integrator::Integrator;
pub use readout::{physical_readout, PhysicalReadout, VALIDITY_LIMIT};
pub use summation::pairwise_sum;

/// Half-width of the deterministic phase jitter used by the quiet start.
pub const QUIET_START_JITTER: f64 = 1e-6;
/// Upper edge of the amplitude window used for the growth-rate fit.
pub const FIT_WINDOW_TOP: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Particle {
    pub theta: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleState {
    pub particles: Vec<Particle>,
    /// `A0 exp(-i phi)`
    pub field: Complex64,
    pub tau: f64,
}

impl EnsembleState {
    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn amplitude(&self) -> f64 {
        self.field.norm()
    }

    /// `phi = -arg(A)`
    pub fn phase(&self) -> f64 {
        // subtraction from +0 keeps a real positive field at phase +0
        0.0 - self.field.arg()
    }

    /// `b = <exp(i theta)>`
    pub fn bunching(&self) -> Complex64 {
        let sum: Complex64 = pairwise_sum(&self.particles, &|q: &Particle| {
            let (s, c) = q.theta.sin_cos();
            Complex64::new(c, s)
        });
        sum / self.len() as f64
    }

    pub fn p_mean(&self) -> f64 {
        let sum: f64 = pairwise_sum(&self.particles, &|q: &Particle| q.p);
        sum / self.len() as f64
    }

    /// `<p> + |A|^2`
    pub fn conserved(&self) -> f64 {
        self.p_mean() + self.field.norm_sqr()
    }

    /// Shift every phase by `chi` and rotate the field by `exp(i chi)`.
    pub fn phase_shifted(&self, chi: f64) -> Self {
        Self {
            particles: self
                .particles
                .iter()
                .map(|q| Particle {
                    theta: q.theta + chi,
                    p: q.p,
                })
                .collect(),
            field: self.field * Complex64::from_polar(1.0, chi),
            tau: self.tau,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.field.re.is_finite()
            && self.field.im.is_finite()
            && self.particles.iter().all(|q| q.theta.is_finite() && q.p.is_finite())
    }

    pub fn record(&self) -> Record {
        Record {
            tau: self.tau,
            amplitude: self.amplitude(),
            phase: self.phase(),
            bunching: self.bunching(),
            p_mean: self.p_mean(),
            conserved: self.conserved(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitMode {
    /// Evenly spaced phases plus a tiny seeded jitter.
    QuietStart,
    /// Phases drawn uniformly from `[0, 2 pi)`.
    UniformRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n_particles: usize,
    pub dt: f64,
    pub tau_end: f64,
    /// Initial scaled amplitude.
    pub seed_amp: f64,
    pub init_mode: InitMode,
    pub rng_seed: u64,
    /// Record every `record_stride` steps.
    pub record_stride: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_particles: 16_384,
            dt: 0.01,
            tau_end: 30.0,
            seed_amp: 1e-4,
            init_mode: InitMode::QuietStart,
            rng_seed: 1,
            record_stride: 10,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_particles < 2 {
            return Err(Error::InvalidParameter {
                name: "n_particles",
                value: self.n_particles as f64,
                reason: "at least two particles are required",
            });
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "dt",
                value: self.dt,
                reason: "time step must be finite and strictly positive",
            });
        }
        if !(self.tau_end >= 0.0 && self.tau_end.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "tau_end",
                value: self.tau_end,
                reason: "end time must be finite and non-negative",
            });
        }
        if !(self.seed_amp > 0.0 && self.seed_amp.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "seed_amp",
                value: self.seed_amp,
                reason: "initial amplitude must be small but strictly positive",
            });
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidParameter {
                name: "record_stride",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        Ok(())
    }

    /// Number of integration steps; the last step lands on `tau_end` up to rounding.
    pub fn steps(&self) -> usize {
        (self.tau_end / self.dt).round() as usize
    }
}

/// Initial ensemble: all momenta zero and a real, positive seed field (`phi = 0`).
pub fn init_ensemble(config: &SimConfig) -> Result<EnsembleState> {
    config.validate()?;
    let n = config.n_particles;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let particles = (0..n)
        .map(|i| {
            let theta = match config.init_mode {
                InitMode::QuietStart => {
                    let jitter = QUIET_START_JITTER * (2.0 * rng.gen::<f64>() - 1.0);
                    TAU * i as f64 / n as f64 + jitter
                }
                InitMode::UniformRandom => TAU * rng.gen::<f64>(),
            };
            Particle { theta, p: 0.0 }
        })
        .collect();
    Ok(EnsembleState {
        particles,
        field: Complex64::new(config.seed_amp, 0.0),
        tau: 0.0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateDerivative {
    pub dtheta: Vec<f64>,
    pub dp: Vec<f64>,
    pub dfield: Complex64,
}

/// Right-hand side of the equations of motion in complex-field form.
pub fn derivative(state: &EnsembleState) -> StateDerivative {
    let a = state.field;
    let dtheta = state.particles.iter().map(|q| q.p).collect();
    let dp = state
        .particles
        .iter()
        .map(|q| -2.0 * (a * Complex64::from_polar(1.0, -q.theta)).re)
        .collect();
    StateDerivative {
        dtheta,
        dp,
        dfield: state.bunching(),
    }
}

/// One RK4 step returning a new state.
pub fn step(state: &EnsembleState, dt: f64) -> Result<EnsembleState> {
    let mut next = state.clone();
    Integrator::new(state.len()).step(&mut next, dt)?;
    Ok(next)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub tau: f64,
    /// Scaled amplitude `A0`.
    pub amplitude: f64,
    pub phase: f64,
    pub bunching: Complex64,
    pub p_mean: f64,
    pub conserved: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Bunching at the end of the run.
    pub bunching: Complex64,
    pub p_mean: f64,
    pub conserved: f64,
    /// Largest `|C(tau) - C(0)|` over all steps.
    pub conserved_drift: f64,
    /// Least-squares slope of `ln A0` while `10 seed_amp <= A0 <= 0.1`.
    pub growth_rate_fit: Option<f64>,
    pub sat_peak: Option<f64>,
    pub sat_tau: Option<f64>,
    /// `|b|` at the saturation peak.
    pub sat_bunching: Option<f64>,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub records: Vec<Record>,
    pub diagnostics: Diagnostics,
    pub final_state: EnsembleState,
}

#[derive(Default)]
struct LineFit {
    n: f64,
    sx: f64,
    sy: f64,
    sxx: f64,
    sxy: f64,
}

impl LineFit {
    fn push(&mut self, x: f64, y: f64) {
        self.n += 1.0;
        self.sx += x;
        self.sy += y;
        self.sxx += x * x;
        self.sxy += x * y;
    }

    fn slope(&self) -> Option<f64> {
        if self.n < 3.0 {
            return None;
        }
        let den = self.n * self.sxx - self.sx * self.sx;
        (den > 0.0).then(|| (self.n * self.sxy - self.sx * self.sy) / den)
    }
}

/// Tracks the growth-rate window and the first local maximum of the amplitude.
struct Monitor {
    fit: LineFit,
    window: (f64, f64),
    fit_closed: bool,
    prev: [(f64, f64, f64); 2],
    peak: Option<(f64, f64, f64)>,
    c0: f64,
    drift: f64,
}

impl Monitor {
    fn new(seed_amp: f64, first: &Record) -> Self {
        Self {
            fit: LineFit::default(),
            window: (10.0 * seed_amp, FIT_WINDOW_TOP),
            fit_closed: false,
            prev: [(f64::NAN, f64::NAN, f64::NAN); 2],
            peak: None,
            c0: first.conserved,
            drift: 0.0,
        }
    }

    fn observe(&mut self, tau: f64, amplitude: f64, bunching: f64, conserved: f64) {
        self.drift = self.drift.max((conserved - self.c0).abs());

        if !self.fit_closed {
            let (lo, hi) = self.window;
            if (lo..=hi).contains(&amplitude) {
                self.fit.push(tau, amplitude.ln());
            } else if self.fit.n > 0.0 {
                self.fit_closed = true;
            }
        }

        // three-point stencil on consecutive samples: prev[0], prev[1], current
        if self.peak.is_none() {
            let (a, b) = (self.prev[0].1, self.prev[1].1);
            if b > a && b >= amplitude {
                self.peak = Some(self.prev[1]);
            }
        }
        self.prev = [self.prev[1], (tau, amplitude, bunching)];
    }
}

/// Integrate from [`init_ensemble`] to `tau_end`.
pub fn run(config: &SimConfig) -> Result<RunOutput> {
    let state = init_ensemble(config)?;
    run_from(state, config)
}

pub fn run_from(mut state: EnsembleState, config: &SimConfig) -> Result<RunOutput> {
    config.validate()?;
    let steps = config.steps();
    let mut integrator = Integrator::new(state.len());
    let first = state.record();
    let mut monitor = Monitor::new(config.seed_amp, &first);
    monitor.observe(first.tau, first.amplitude, first.bunching.norm(), first.conserved);
    let mut records = vec![first];
    let t0 = state.tau;

    for k in 1..=steps {
        integrator.step(&mut state, config.dt)?;
        // avoid accumulating dt rounding in tau
        state.tau = t0 + k as f64 * config.dt;
        let rec = state.record();
        monitor.observe(rec.tau, rec.amplitude, rec.bunching.norm(), rec.conserved);
        if k % config.record_stride == 0 || k == steps {
            records.push(rec);
        }
    }

    let last = records.last().copied().unwrap_or(first);
    let diagnostics = Diagnostics {
        bunching: last.bunching,
        p_mean: last.p_mean,
        conserved: last.conserved,
        conserved_drift: monitor.drift,
        growth_rate_fit: monitor.fit.slope(),
        sat_peak: monitor.peak.map(|p| p.1),
        sat_tau: monitor.peak.map(|p| p.0),
        sat_bunching: monitor.peak.map(|p| p.2),
        steps,
    };
    Ok(RunOutput {
        records,
        diagnostics,
        final_state: state,
    })
}
