//! Grid scan of saturation amplitude and gain time over concentration and
//! polarization.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use solvfel::rotor::RigidRotor;
use solvfel::scenario::{derive_chain, sweep, SweepRow};

use crate::config::ScenarioConfig;

pub const SWEEP_FILE: &str = "sweep.csv";
pub const SWEEP_HEADER: &str = "rho,p_z,a_sat,t_gain";
const DEFAULT_POINTS: usize = 5;

/// `points` values spaced evenly in log from `center / 10` to `center * 10`.
pub fn log_grid(center: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![center];
    }
    (0..points)
        .map(|k| center * 10f64.powf(-1.0 + 2.0 * k as f64 / (points - 1) as f64))
        .collect()
}

/// Sweep around the config point. Empty axes default to a 5-point log grid
/// spanning two decades.
pub fn run_sweep(config: &ScenarioConfig, rhos: &[f64], p_zs: &[f64]) -> Result<Vec<SweepRow>> {
    let rotor = RigidRotor::water();
    let chain = derive_chain(&config.inputs, &rotor)?;
    let base = chain.system_params(&config.inputs, rotor)?;
    let rhos = if rhos.is_empty() { log_grid(chain.rho, DEFAULT_POINTS) } else { rhos.to_vec() };
    let p_zs = if p_zs.is_empty() {
        if chain.p_z <= 0.0 {
            bail!("cannot centre a polarization grid on P_z = 0; pass explicit values");
        }
        log_grid(chain.p_z, DEFAULT_POINTS)
    } else {
        p_zs.to_vec()
    };
    Ok(sweep(&rhos, &p_zs, &base)?)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", r.rho, r.p_z, r.a_sat, r.t_gain);
    }
    out
}
