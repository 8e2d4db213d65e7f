//! Browser bindings: an instability run, a scaling-law explorer and thermal
//! rotational populations. All results come back as flat `Float64Array`s.

use solvfel::dynamics::{run, InitMode, SimConfig};
use solvfel::rotor::RigidRotor;
use solvfel::scaling::{GainCoefficients, SystemParams};
use wasm_bindgen::prelude::*;

fn js(e: solvfel::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Rows of `(tau, A0, |b|)` for a quiet-start run.
pub fn instability_rows(
    n_particles: usize,
    tau_end: f64,
    seed_amp: f64,
    rng_seed: u64,
) -> solvfel::Result<Vec<f64>> {
    let config = SimConfig {
        n_particles,
        tau_end,
        seed_amp,
        rng_seed,
        init_mode: InitMode::QuietStart,
        ..SimConfig::default()
    };
    let out = run(&config)?;
    Ok(out
        .records
        .iter()
        .flat_map(|r| [r.tau, r.amplitude, r.bunching.norm()])
        .collect())
}

/// Rows of `(rho, A_sat, t_gain)` with `rho` log-spaced over `[rho_min, rho_max]`.
pub fn scaling_rows(
    rho_min: f64,
    rho_max: f64,
    points: usize,
    p_z: f64,
    n_waters: u32,
    delta_w: f64,
) -> solvfel::Result<Vec<f64>> {
    let dn = solvfel::mixing::solvation_inversion(n_waters, delta_w)?;
    let base = SystemParams::new(n_waters, dn, rho_min, p_z, RigidRotor::water())?;
    let points = points.max(2);
    let (lo, hi) = (rho_min.log10(), rho_max.log10());
    let mut out = Vec::with_capacity(3 * points);
    for k in 0..points {
        let rho = 10f64.powf(lo + (hi - lo) * k as f64 / (points - 1) as f64);
        let params = base.with_rho(rho);
        params.validate()?;
        let g = GainCoefficients::for_system(&params)?;
        out.extend([rho, g.a_sat, g.t_gain]);
    }
    Ok(out)
}

/// `R_0 .. R_lmax` followed by the thermal inversion for `n_waters`.
pub fn population_rows(temperature: f64, l_max: u32, n_waters: u32) -> solvfel::Result<Vec<f64>> {
    let pop = RigidRotor::water().thermal_population(n_waters, temperature, l_max)?;
    let mut out = pop.ratios;
    out.push(pop.delta_n_thermal);
    Ok(out)
}

#[wasm_bindgen]
pub fn instability(n_particles: usize, tau_end: f64, seed_amp: f64, rng_seed: u32) -> Result<Vec<f64>, JsError> {
    instability_rows(n_particles, tau_end, seed_amp, u64::from(rng_seed)).map_err(js)
}

#[wasm_bindgen]
pub fn scaling(
    rho_min: f64,
    rho_max: f64,
    points: usize,
    p_z: f64,
    n_waters: u32,
    delta_w: f64,
) -> Result<Vec<f64>, JsError> {
    scaling_rows(rho_min, rho_max, points, p_z, n_waters, delta_w).map_err(js)
}

#[wasm_bindgen]
pub fn populations(temperature: f64, l_max: u32, n_waters: u32) -> Result<Vec<f64>, JsError> {
    population_rows(temperature, l_max, n_waters).map_err(js)
}
