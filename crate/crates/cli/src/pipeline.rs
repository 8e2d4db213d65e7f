//! End-to-end scenario: physical chain, scaled simulation, physical readout.

use std::path::Path;

use anyhow::Result;
use serde_json::{json, Map, Value};
use solvfel::dynamics::{physical_readout, run, Record};
use solvfel::harmonics::QUADRATURE_ORDERS;
use solvfel::rotor::RigidRotor;
use solvfel::scenario::{derive_chain, slippage_check, DerivedChain};

use crate::config::ScenarioConfig;
use crate::output::{
    num, opt_num, summary_json, trajectory_csv, write_file, PLOT_FILE, SUMMARY_FILE, TRAJECTORY_FILE,
};
use crate::plot::render_svg;

/// Linear growth rate of the scaled amplitude.
pub const LINEAR_GROWTH_RATE: f64 = 0.866_025_403_784_438_6;
const POPULATION_LEVELS: u32 = 5;

#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub summary: Value,
    /// Empty when the mechanism is off.
    pub records: Vec<Record>,
    pub mechanism_off: bool,
}

impl ScenarioOutcome {
    /// Write `summary.json`, and `trajectory.csv` plus an optional SVG when a
    /// trajectory exists.
    pub fn write(&self, dir: &Path, plot: Option<bool>) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        write_file(&dir.join(SUMMARY_FILE), &summary_json(&self.summary))?;
        if !self.records.is_empty() {
            write_file(&dir.join(TRAJECTORY_FILE), &trajectory_csv(&self.records))?;
            if let Some(log_scale) = plot {
                let rows: Vec<_> = self.records.iter().map(Into::into).collect();
                write_file(&dir.join(PLOT_FILE), &render_svg(&rows, log_scale)?)?;
            }
        }
        Ok(())
    }
}

pub fn derived_json(chain: &DerivedChain, rotor: &RigidRotor, temperature: f64, n: u32) -> Result<Value> {
    let g = &chain.gain;
    let pops = rotor.thermal_population(n, temperature, POPULATION_LEVELS)?;
    Ok(json!({
        "moment_of_inertia": num(chain.moment_of_inertia),
        "splitting": num(chain.splitting),
        "wavenumber_per_cm": num(chain.wavenumber_per_cm),
        "omega_c": num(chain.omega_c),
        "wavelength": num(chain.wavelength),
        "d0": num(chain.d0),
        "d0_tilde": num(chain.d0_tilde),
        "population_ratios": pops.ratios.iter().copied().map(num).collect::<Vec<_>>(),
        "reduced_splitting": num(chain.reduced_splitting),
        "delta_n_thermal": num(chain.delta_n_thermal),
        "p_z": num(chain.p_z),
        "w_plus": num(chain.w_plus),
        "w_minus": num(chain.w_minus),
        "delta_n_bar": num(chain.delta_n_bar),
        "rho": num(chain.rho),
        "alpha": num(g.alpha),
        "beta": num(g.beta),
        "c_a": num(g.c_a),
        "c_t": num(g.c_t),
        "a_sat": num(g.a_sat),
        "t_gain": num(g.t_gain),
        "mechanism_off": g.mechanism_off,
    }))
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioOutcome> {
    let rotor = RigidRotor::water();
    let chain = derive_chain(&config.inputs, &rotor)?;
    let mut warnings: Vec<String> = Vec::new();

    let mut summary = Map::new();
    summary.insert("resolved_config".into(), serde_json::to_value(config.resolved())?);
    summary.insert("defaults_applied".into(), json!(config.defaults_applied));
    summary.insert("quadrature".into(), serde_json::to_value(QUADRATURE_ORDERS)?);
    summary.insert(
        "derived".into(),
        derived_json(&chain, &rotor, config.inputs.temperature, config.inputs.n_waters)?,
    );

    if let (Some(v), Some(lb), Some(lg)) = (config.velocity, config.bunch_length, config.gain_length) {
        let s = slippage_check(lb, lg, v, rotor.constants.c)?;
        if s.slippage_dominated {
            warnings.push(format!("slippage: {}", s.verdict()));
        }
        summary.insert(
            "slippage".into(),
            json!({
                "l_b": num(s.l_b),
                "l_g": num(s.l_g),
                "v": num(s.v),
                "l_s": num(s.l_s),
                "ratio": num(s.ratio),
                "verdict": s.verdict(),
            }),
        );
    }
    if let (Some(v), Some(l)) = (config.velocity, config.transit_length) {
        let transit = l / v;
        summary.insert(
            "transit".into(),
            json!({
                "transit_time": num(transit),
                "t_gain_over_transit": num(chain.gain.t_gain / transit),
            }),
        );
    }

    if chain.gain.mechanism_off {
        warnings.push(
            "P_z = 0: the instability is switched off, the gain time is infinite and no trajectory was computed"
                .into(),
        );
        summary.insert("dynamics".into(), Value::Null);
        summary.insert("readout".into(), Value::Null);
        summary.insert("warnings".into(), json!(warnings));
        return Ok(ScenarioOutcome {
            summary: Value::Object(summary),
            records: Vec::new(),
            mechanism_off: true,
        });
    }

    let out = run(&config.sim)?;
    let d = &out.diagnostics;
    if d.growth_rate_fit.is_none() {
        warnings.push("amplitude never crossed the growth-fit window; no growth rate fitted".into());
    }
    if d.sat_peak.is_none() {
        warnings.push("no saturation peak within the simulated interval".into());
    }
    summary.insert(
        "dynamics".into(),
        json!({
            "growth_rate_fit": opt_num(d.growth_rate_fit),
            "growth_rate_linear": num(LINEAR_GROWTH_RATE),
            "sat_peak": opt_num(d.sat_peak),
            "sat_tau": opt_num(d.sat_tau),
            "sat_bunching": opt_num(d.sat_bunching),
            "final_amplitude": num(out.final_state.amplitude()),
            "final_bunching": num(d.bunching.norm()),
            "final_p_mean": num(d.p_mean),
            "conserved_drift": num(d.conserved_drift),
            "steps": d.steps,
        }),
    );

    let readout = physical_readout(&out.final_state, &chain.gain, &rotor, config.inputs.n_waters)?;
    if let Some(w) = &readout.warning {
        warnings.push(w.clone());
    }
    summary.insert(
        "readout".into(),
        json!({
            "a0_at_unit_amplitude": num(chain.gain.a_sat),
            "t_at_unit_tau": num(chain.gain.t_gain),
            "a0_at_saturation": opt_num(d.sat_peak.map(|a| a * chain.gain.a_sat)),
            "t_at_saturation": opt_num(d.sat_tau.map(|t| t * chain.gain.t_gain)),
            "final_a0": num(readout.a0),
            "final_t": num(readout.t),
            "max_theta_dot": num(readout.max_theta_dot),
            "validity_ratio": num(readout.validity_ratio),
        }),
    );
    summary.insert("warnings".into(), json!(warnings));

    Ok(ScenarioOutcome {
        summary: Value::Object(summary),
        records: out.records,
        mechanism_off: false,
    })
}
