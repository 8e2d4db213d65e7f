use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use solvfel::rotor::RigidRotor;
use solvfel::scenario::derive_chain;
use solvfel_cli::config::{load_config, parse_config, Overrides, ScenarioConfig};
use solvfel_cli::output::{parse_trajectory_csv, write_file, PLOT_FILE, TRAJECTORY_FILE};
use solvfel_cli::pipeline::{derived_json, run_scenario};
use solvfel_cli::plot::render_svg;
use solvfel_cli::sweep::{run_sweep, sweep_csv, SWEEP_FILE};
use solvfel_cli::verify::run_checks;
use solvfel_cli::{exit_code, AXON_PRESET, EXIT_FAILURE, EXIT_MECHANISM_OFF, EXIT_OK};

/// Collective rotational instability of solvated-ion water shells.
///
/// The worker count for the particle loop follows RAYON_NUM_THREADS; outputs
/// do not depend on it.
#[derive(Parser)]
#[command(name = "solvfel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the physical chain (rotor, polarization, gain scales) as JSON.
    Derive {
        /// Scenario file; the axon preset when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run the built-in physics self-checks.
    Verify,
    /// Run a scenario from a config file or an earlier summary.json.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run the bundled axon preset.
    Axon {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Tabulate A_sat and t_gain over a grid of concentration and polarization.
    Sweep {
        /// Scenario supplying the remaining parameters; the axon preset when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated ion densities [m^-3].
        #[arg(long, value_delimiter = ',')]
        rho: Vec<f64>,
        /// Comma-separated polarization values.
        #[arg(long, value_delimiter = ',')]
        pz: Vec<f64>,
    },
    /// Draw trajectory.csv as an SVG chart.
    Plot {
        /// Defaults to <out>/trajectory.csv.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        log_scale: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(0..=i64::MAX as u64))]
    seed: Option<u64>,
    #[arg(long)]
    particles: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    tau_end: Option<f64>,
    /// Also write trajectory.svg.
    #[arg(long)]
    plot: bool,
    /// Logarithmic amplitude axis in the chart; implies --plot.
    #[arg(long)]
    log_scale: bool,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            rng_seed: self.seed,
            n_particles: self.particles,
            dt: self.dt,
            tau_end: self.tau_end,
        }
    }

    fn plot(&self) -> Option<bool> {
        (self.plot || self.log_scale).then_some(self.log_scale)
    }
}

fn preset_or(path: Option<&Path>) -> Result<ScenarioConfig> {
    Ok(match path {
        Some(p) => load_config(p, &Overrides::default())?,
        None => parse_config(AXON_PRESET, &Overrides::default())?,
    })
}

fn simulate(config: &ScenarioConfig, run: &RunArgs) -> Result<i32> {
    let outcome = run_scenario(config)?;
    outcome.write(&run.out, run.plot())?;
    for w in outcome.summary["warnings"].as_array().into_iter().flatten() {
        eprintln!("warning: {}", w.as_str().unwrap_or_default());
    }
    let d = &outcome.summary["derived"];
    println!("A_sat  = {} V s/m", d["a_sat"]);
    println!("t_gain = {} s", d["t_gain"]);
    if outcome.mechanism_off {
        return Ok(EXIT_MECHANISM_OFF);
    }
    let dy = &outcome.summary["dynamics"];
    println!("growth rate (fit) = {}", dy["growth_rate_fit"]);
    println!("saturation peak   = {} at tau = {}", dy["sat_peak"], dy["sat_tau"]);
    println!("outputs written to {}", run.out.display());
    Ok(EXIT_OK)
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Derive { config } => {
            let c = preset_or(config.as_deref())?;
            let rotor = RigidRotor::water();
            let chain = derive_chain(&c.inputs, &rotor)?;
            let v = derived_json(&chain, &rotor, c.inputs.temperature, c.inputs.n_waters)?;
            println!("{}", serde_json::to_string_pretty(&v)?);
            Ok(EXIT_OK)
        }
        Command::Verify => {
            let checks = run_checks();
            for c in &checks {
                println!("{}", c.line());
            }
            Ok(if checks.iter().all(|c| c.pass) { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Simulate { config, run } => {
            let c = load_config(&config, &run.overrides())?;
            simulate(&c, &run)
        }
        Command::Axon { run } => {
            let c = parse_config(AXON_PRESET, &run.overrides())?;
            simulate(&c, &run)
        }
        Command::Sweep { config, out, rho, pz } => {
            let c = preset_or(config.as_deref())?;
            let rows = run_sweep(&c, &rho, &pz)?;
            std::fs::create_dir_all(&out)?;
            let path = out.join(SWEEP_FILE);
            write_file(&path, &sweep_csv(&rows))?;
            println!("{} grid points written to {}", rows.len(), path.display());
            Ok(EXIT_OK)
        }
        Command::Plot { input, out, log_scale } => {
            let input = input.unwrap_or_else(|| out.join(TRAJECTORY_FILE));
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("cannot read {}", input.display()))?;
            let rows = parse_trajectory_csv(&text)?;
            std::fs::create_dir_all(&out)?;
            let path = out.join(PLOT_FILE);
            write_file(&path, &render_svg(&rows, log_scale)?)?;
            println!("chart written to {}", path.display());
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
