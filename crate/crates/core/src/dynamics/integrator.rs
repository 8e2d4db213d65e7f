//! Classical RK4 with per-particle stage buffers.
//!
//! Each stage is a single pass over the particles that evaluates the stage
//! state, the force, and the phasor, followed by one pairwise reduction for the
//! field derivative. The reduction order is fixed so results do not depend on
//! the thread count.

use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::summation::pairwise_sum;
use super::{EnsembleState, Particle};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default)]
struct Stage {
    k_theta: f64,
    k_p: f64,
    phasor: Complex64,
    acc_theta: f64,
    acc_p: f64,
}

#[derive(Debug, Clone, Default)]
pub struct Integrator {
    stages: Vec<Stage>,
}

fn for_each_pair<F>(particles: &[Particle], stages: &mut [Stage], f: F)
where
    F: Fn(&Particle, &mut Stage) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    particles
        .par_iter()
        .zip(stages.par_iter_mut())
        .with_min_len(1024)
        .for_each(|(q, st)| f(q, st));
    #[cfg(not(feature = "parallel"))]
    particles
        .iter()
        .zip(stages.iter_mut())
        .for_each(|(q, st)| f(q, st));
}

impl Integrator {
    pub fn new(n_particles: usize) -> Self {
        Self {
            stages: vec![Stage::default(); n_particles],
        }
    }

    /// Advance `state` by `h` in place.
    pub fn step(&mut self, state: &mut EnsembleState, h: f64) -> Result<()> {
        let n = state.particles.len();
        if self.stages.len() != n {
            self.stages = vec![Stage::default(); n];
        }
        let field = state.field;
        let offsets = [0.0, h / 2.0, h / 2.0, h];
        let weights = [1.0, 2.0, 2.0, 1.0];
        let mut k_field = Complex64::new(0.0, 0.0);
        let mut acc_field = Complex64::new(0.0, 0.0);

        for s in 0..4 {
            let c = offsets[s];
            let w = weights[s];
            let first = s == 0;
            let a = field + k_field * c;
            for_each_pair(&state.particles, &mut self.stages, |q, st| {
                let (theta, p) = if first {
                    (q.theta, q.p)
                } else {
                    (q.theta + c * st.k_theta, q.p + c * st.k_p)
                };
                let (sin, cos) = theta.sin_cos();
                // -2 Re(A exp(-i theta))
                let force = -2.0 * (a.re * cos + a.im * sin);
                st.k_theta = p;
                st.k_p = force;
                st.phasor = Complex64::new(cos, sin);
                if first {
                    st.acc_theta = p;
                    st.acc_p = force;
                } else {
                    st.acc_theta += w * p;
                    st.acc_p += w * force;
                }
            });
            let sum: Complex64 = pairwise_sum(&self.stages, &|st: &Stage| st.phasor);
            k_field = sum / n as f64;
            acc_field += k_field * w;
        }

        let sixth = h / 6.0;
        for_each_pair_mut(&mut state.particles, &self.stages, |q, st| {
            q.theta += sixth * st.acc_theta;
            q.p += sixth * st.acc_p;
        });
        state.field += acc_field * sixth;
        state.tau += h;

        if !state.is_finite() {
            return Err(Error::NumericalBlowup { tau: state.tau });
        }
        Ok(())
    }
}

fn for_each_pair_mut<F>(particles: &mut [Particle], stages: &[Stage], f: F)
where
    F: Fn(&mut Particle, &Stage) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    particles
        .par_iter_mut()
        .zip(stages.par_iter())
        .with_min_len(1024)
        .for_each(|(q, st)| f(q, st));
    #[cfg(not(feature = "parallel"))]
    particles
        .iter_mut()
        .zip(stages.iter())
        .for_each(|(q, st)| f(q, st));
}
