//! Scenario configuration: flat TOML, or the `resolved_config` block of a
//! previously written summary.

use std::fmt;
use std::ops::Range;
use std::path::Path;

use serde::{Deserialize, Serialize};
use solvfel::dynamics::{InitMode, SimConfig};
use solvfel::rotor::RigidRotor;
use solvfel::scenario::{derive_chain, slippage_check, Concentration, PhysicalInputs, PolarizationSource};
use solvfel::mixing::DEFAULT_DELTA_W;
use toml::Spanned;

pub const DEFAULT_TEMPERATURE: f64 = 300.0;
pub const DEFAULT_N_WATERS: u32 = 30;

/// Every accepted key, in the order used for output.
pub const KEY_ORDER: [&str; 19] = [
    "temperature",
    "n_waters",
    "field_e0z",
    "pz_override",
    "rho",
    "n_ions",
    "volume",
    "delta_w",
    "n_particles",
    "dt",
    "tau_end",
    "seed_amp",
    "init_mode",
    "rng_seed",
    "record_stride",
    "velocity",
    "bunch_length",
    "gain_length",
    "transit_length",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn new(key: Option<&str>, line: Option<usize>, message: impl Into<String>) -> Self {
        Self {
            key: key.map(str::to_owned),
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(key) = &self.key {
            write!(f, "`{key}`: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    temperature: Option<Spanned<f64>>,
    n_waters: Option<Spanned<i64>>,
    field_e0z: Option<Spanned<f64>>,
    pz_override: Option<Spanned<f64>>,
    rho: Option<Spanned<f64>>,
    n_ions: Option<Spanned<f64>>,
    volume: Option<Spanned<f64>>,
    delta_w: Option<Spanned<f64>>,
    n_particles: Option<Spanned<i64>>,
    dt: Option<Spanned<f64>>,
    tau_end: Option<Spanned<f64>>,
    seed_amp: Option<Spanned<f64>>,
    init_mode: Option<Spanned<InitMode>>,
    rng_seed: Option<Spanned<i64>>,
    record_stride: Option<Spanned<i64>>,
    velocity: Option<Spanned<f64>>,
    bunch_length: Option<Spanned<f64>>,
    gain_length: Option<Spanned<f64>>,
    transit_length: Option<Spanned<f64>>,
}

/// Command-line values that replace config entries.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub rng_seed: Option<u64>,
    pub n_particles: Option<usize>,
    pub dt: Option<f64>,
    pub tau_end: Option<f64>,
}

/// Fully resolved, validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub inputs: PhysicalInputs,
    pub sim: SimConfig,
    /// Ion velocity [m/s].
    pub velocity: Option<f64>,
    pub bunch_length: Option<f64>,
    pub gain_length: Option<f64>,
    /// Region length crossed at `velocity` [m].
    pub transit_length: Option<f64>,
    /// Keys that were filled from defaults, in key order.
    pub defaults_applied: Vec<String>,
}

/// Flat view written into the summary and accepted back as input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub temperature: f64,
    pub n_waters: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_e0z: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pz_override: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_ions: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume: Option<f64>,
    pub delta_w: f64,
    pub n_particles: usize,
    pub dt: f64,
    pub tau_end: f64,
    pub seed_amp: f64,
    pub init_mode: InitMode,
    pub rng_seed: u64,
    pub record_stride: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub velocity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bunch_length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gain_length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transit_length: Option<f64>,
}

impl ScenarioConfig {
    pub fn resolved(&self) -> ResolvedConfig {
        let (field_e0z, pz_override) = match self.inputs.polarization {
            PolarizationSource::Field(e) => (Some(e), None),
            PolarizationSource::Override(p) => (None, Some(p)),
        };
        let (rho, n_ions, volume) = match self.inputs.concentration {
            Concentration::Density(r) => (Some(r), None, None),
            Concentration::Count { n_ions, volume } => (None, Some(n_ions), Some(volume)),
        };
        ResolvedConfig {
            temperature: self.inputs.temperature,
            n_waters: self.inputs.n_waters,
            field_e0z,
            pz_override,
            rho,
            n_ions,
            volume,
            delta_w: self.inputs.delta_w,
            n_particles: self.sim.n_particles,
            dt: self.sim.dt,
            tau_end: self.sim.tau_end,
            seed_amp: self.sim.seed_amp,
            init_mode: self.sim.init_mode,
            rng_seed: self.sim.rng_seed,
            record_stride: self.sim.record_stride,
            velocity: self.velocity,
            bunch_length: self.bunch_length,
            gain_length: self.gain_length,
            transit_length: self.transit_length,
        }
    }
}

/// A value with the line it came from, if any.
#[derive(Debug, Clone, Copy)]
struct Located<T> {
    value: T,
    line: Option<usize>,
}

struct Lines<'a> {
    text: &'a str,
}

impl Lines<'_> {
    fn line_of(&self, span: &Range<usize>) -> usize {
        let end = span.start.min(self.text.len());
        self.text[..end].bytes().filter(|b| *b == b'\n').count() + 1
    }

    fn take<T: Clone>(&self, field: &Option<Spanned<T>>) -> Option<Located<T>> {
        field.as_ref().map(|s| Located {
            value: s.get_ref().clone(),
            line: Some(self.line_of(&s.span())),
        })
    }
}

fn overridden<T>(value: Option<T>, fallback: Option<Located<T>>) -> Option<Located<T>> {
    match value {
        Some(value) => Some(Located { value, line: None }),
        None => fallback,
    }
}

/// Read a `.toml` config, or a `.json` summary from an earlier run.
pub fn load_config(path: &Path, overrides: &Overrides) -> Result<ScenarioConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        ConfigError::new(None, None, format!("cannot read {}: {e}", path.display()))
    })?;
    if path.extension().is_some_and(|e| e == "json") {
        parse_summary(&text, overrides)
    } else {
        parse_config(&text, overrides)
    }
}

/// Rebuild a config from the `resolved_config` and `defaults_applied` entries
/// of a summary so that a rerun reproduces the same outputs.
pub fn parse_summary(text: &str, overrides: &Overrides) -> Result<ScenarioConfig, ConfigError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| ConfigError::new(None, Some(e.line()), format!("invalid summary JSON: {e}")))?;
    let resolved = value
        .get("resolved_config")
        .ok_or_else(|| ConfigError::new(Some("resolved_config"), None, "missing from summary"))?;
    let as_toml = toml::to_string(resolved).map_err(|e| {
        ConfigError::new(Some("resolved_config"), None, format!("cannot be converted: {e}"))
    })?;
    let mut config = parse_config(&as_toml, overrides)?;
    let previous: Vec<String> = match value.get("defaults_applied") {
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| {
            ConfigError::new(Some("defaults_applied"), None, format!("must be a list of keys: {e}"))
        })?,
        None => Vec::new(),
    };
    let explicit = explicit_override_keys(overrides);
    config.defaults_applied = previous
        .into_iter()
        .filter(|k| !explicit.contains(&k.as_str()))
        .collect();
    Ok(config)
}

fn explicit_override_keys(o: &Overrides) -> Vec<&'static str> {
    let mut keys = Vec::new();
    if o.n_particles.is_some() {
        keys.push("n_particles");
    }
    if o.dt.is_some() {
        keys.push("dt");
    }
    if o.tau_end.is_some() {
        keys.push("tau_end");
    }
    if o.rng_seed.is_some() {
        keys.push("rng_seed");
    }
    keys
}

pub fn parse_config(text: &str, overrides: &Overrides) -> Result<ScenarioConfig, ConfigError> {
    let lines = Lines { text };
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| lines.line_of(&s));
        ConfigError::new(None, line, e.message().trim().to_owned())
    })?;
    let mut defaults = Vec::new();
    let sim_defaults = SimConfig::default();

    let temperature = lines.take(&raw.temperature);
    let n_waters = lines.take(&raw.n_waters);
    let field = lines.take(&raw.field_e0z);
    let pz = lines.take(&raw.pz_override);
    let rho = lines.take(&raw.rho);
    let n_ions = lines.take(&raw.n_ions);
    let volume = lines.take(&raw.volume);
    let delta_w = lines.take(&raw.delta_w);
    let n_particles = lines.take(&raw.n_particles);
    let dt = overridden(overrides.dt, lines.take(&raw.dt));
    let tau_end = overridden(overrides.tau_end, lines.take(&raw.tau_end));
    let seed_amp = lines.take(&raw.seed_amp);
    let init_mode = lines.take(&raw.init_mode);
    let rng_seed = lines.take(&raw.rng_seed);
    let record_stride = lines.take(&raw.record_stride);
    let velocity = lines.take(&raw.velocity);
    let bunch_length = lines.take(&raw.bunch_length);
    let gain_length = lines.take(&raw.gain_length);
    let transit_length = lines.take(&raw.transit_length);

    let mut or_default = |key: &str, v: Option<Located<f64>>, d: f64| match v {
        Some(v) => v,
        None => {
            defaults.push(key.to_owned());
            Located { value: d, line: None }
        }
    };
    let temperature = or_default("temperature", temperature, DEFAULT_TEMPERATURE);
    let delta_w = or_default("delta_w", delta_w, DEFAULT_DELTA_W);
    let dt = or_default("dt", dt, sim_defaults.dt);
    let tau_end = or_default("tau_end", tau_end, sim_defaults.tau_end);
    let seed_amp = or_default("seed_amp", seed_amp, sim_defaults.seed_amp);
    let n_waters = match n_waters {
        Some(n) => Located {
            value: count("n_waters", n, u32::MAX as i64)? as u32,
            line: n.line,
        },
        None => {
            defaults.push("n_waters".into());
            Located { value: DEFAULT_N_WATERS, line: None }
        }
    };

    let n_particles_line = if overrides.n_particles.is_some() { None } else { n_particles.and_then(|v| v.line) };
    let record_stride_line = record_stride.and_then(|v| v.line);
    let n_particles = match (overrides.n_particles, n_particles) {
        (Some(n), _) => n,
        (None, Some(n)) => count("n_particles", n, i64::MAX)? as usize,
        (None, None) => {
            defaults.push("n_particles".into());
            sim_defaults.n_particles
        }
    };
    let record_stride = match record_stride {
        Some(n) => count("record_stride", n, i64::MAX)? as usize,
        None => {
            defaults.push("record_stride".into());
            sim_defaults.record_stride
        }
    };
    let rng_seed = match (overrides.rng_seed, rng_seed) {
        (Some(s), _) => s,
        (None, Some(s)) if s.value < 0 => {
            return Err(ConfigError::new(Some("rng_seed"), s.line, "must be non-negative"))
        }
        (None, Some(s)) => s.value as u64,
        (None, None) => {
            defaults.push("rng_seed".into());
            sim_defaults.rng_seed
        }
    };
    let init_mode = match init_mode {
        Some(m) => m.value,
        None => {
            defaults.push("init_mode".into());
            sim_defaults.init_mode
        }
    };

    let polarization = match (field, pz) {
        (Some(e), None) => PolarizationSource::Field(e.value),
        (None, Some(p)) => PolarizationSource::Override(p.value),
        (Some(_), Some(p)) => {
            return Err(ConfigError::new(
                Some("pz_override"),
                p.line,
                "conflicts with `field_e0z`; supply exactly one",
            ))
        }
        (None, None) => {
            return Err(ConfigError::new(
                Some("field_e0z"),
                None,
                "missing; supply `field_e0z` or `pz_override`",
            ))
        }
    };
    let concentration = match (rho, n_ions, volume) {
        (Some(r), None, None) => Concentration::Density(r.value),
        (None, Some(n), Some(v)) => Concentration::Count {
            n_ions: n.value,
            volume: v.value,
        },
        (Some(r), _, _) => {
            return Err(ConfigError::new(
                Some("rho"),
                r.line,
                "conflicts with `n_ions`/`volume`; supply `rho` or both `n_ions` and `volume`",
            ))
        }
        (None, Some(n), None) => {
            return Err(ConfigError::new(Some("volume"), n.line, "missing; `n_ions` requires `volume`"))
        }
        (None, None, Some(v)) => {
            return Err(ConfigError::new(Some("n_ions"), v.line, "missing; `volume` requires `n_ions`"))
        }
        (None, None, None) => {
            return Err(ConfigError::new(
                Some("rho"),
                None,
                "missing; supply `rho` or both `n_ions` and `volume`",
            ))
        }
    };

    defaults.sort_by_key(|k| KEY_ORDER.iter().position(|o| o == k));

    let config = ScenarioConfig {
        inputs: PhysicalInputs {
            temperature: temperature.value,
            n_waters: n_waters.value,
            polarization,
            concentration,
            delta_w: delta_w.value,
        },
        sim: SimConfig {
            n_particles,
            dt: dt.value,
            tau_end: tau_end.value,
            seed_amp: seed_amp.value,
            init_mode,
            rng_seed,
            record_stride,
        },
        velocity: velocity.map(|v| v.value),
        bunch_length: bunch_length.map(|v| v.value),
        gain_length: gain_length.map(|v| v.value),
        transit_length: transit_length.map(|v| v.value),
        defaults_applied: defaults,
    };

    let line_for = |key: &str| -> Option<usize> {
        match key {
            "temperature" => temperature.line,
            "n_waters" => n_waters.line,
            "field_e0z" => field.and_then(|v| v.line),
            "pz_override" => pz.and_then(|v| v.line),
            "rho" => rho.and_then(|v| v.line),
            "n_ions" => n_ions.and_then(|v| v.line),
            "volume" => volume.and_then(|v| v.line),
            "delta_w" => delta_w.line,
            "dt" => dt.line,
            "n_particles" => n_particles_line,
            "record_stride" => record_stride_line,
            "tau_end" => tau_end.line,
            "seed_amp" => seed_amp.line,
            "velocity" => velocity.and_then(|v| v.line),
            "bunch_length" => bunch_length.and_then(|v| v.line),
            "gain_length" => gain_length.and_then(|v| v.line),
            "transit_length" => transit_length.and_then(|v| v.line),
            _ => None,
        }
    };
    validate(&config).map_err(|(key, message)| ConfigError::new(Some(key), line_for(key), message))?;
    Ok(config)
}

fn count(key: &str, v: Located<i64>, max: i64) -> Result<i64, ConfigError> {
    if v.value < 1 || v.value > max {
        Err(ConfigError::new(Some(key), v.line, format!("must be a positive integer, got {}", v.value)))
    } else {
        Ok(v.value)
    }
}

/// Config key for a parameter name reported by the physics library.
fn config_key(name: &str) -> &'static str {
    match name {
        "temperature" => "temperature",
        "n" | "n_waters" => "n_waters",
        "field_e0z" => "field_e0z",
        "p_z" => "pz_override",
        "rho" => "rho",
        "n_ions" => "n_ions",
        "volume" => "volume",
        "delta_w" | "delta_n_bar" => "delta_w",
        "n_particles" => "n_particles",
        "dt" => "dt",
        "tau_end" => "tau_end",
        "seed_amp" => "seed_amp",
        "record_stride" => "record_stride",
        "velocity" => "velocity",
        "bunch_length" => "bunch_length",
        "gain_length" => "gain_length",
        _ => "config",
    }
}

fn library_error(e: solvfel::Error) -> (&'static str, String) {
    let key = match &e {
        solvfel::Error::InvalidParameter { name, .. } | solvfel::Error::OutOfRange { name, .. } => {
            config_key(name)
        }
        _ => "config",
    };
    (key, e.to_string())
}

fn validate(config: &ScenarioConfig) -> Result<(), (&'static str, String)> {
    let positive = |key: &'static str, v: Option<f64>| match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err((key, format!("must be finite and positive, got {x}"))),
        _ => Ok(()),
    };
    positive("velocity", config.velocity)?;
    positive("bunch_length", config.bunch_length)?;
    positive("gain_length", config.gain_length)?;
    positive("transit_length", config.transit_length)?;

    config.sim.validate().map_err(library_error)?;
    if let PolarizationSource::Override(p) = config.inputs.polarization {
        if !p.is_finite() || p < 0.0 {
            return Err(("pz_override", format!("must be finite and non-negative, got {p}")));
        }
    }
    let rotor = RigidRotor::water();
    derive_chain(&config.inputs, &rotor).map_err(library_error)?;

    match (config.velocity, config.bunch_length, config.gain_length) {
        (Some(v), Some(lb), Some(lg)) => {
            slippage_check(lb, lg, v, rotor.constants.c).map_err(library_error)?;
        }
        (None, Some(_), _) | (None, _, Some(_)) => {
            return Err(("velocity", "required when `bunch_length` or `gain_length` is given".into()))
        }
        _ => {}
    }
    if config.transit_length.is_some() && config.velocity.is_none() {
        return Err(("velocity", "required when `transit_length` is given".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "field_e0z = 100.0\nrho = 1.27e17\n";

    #[test]
    fn minimal_config_fills_defaults() {
        let c = parse_config(MINIMAL, &Overrides::default()).unwrap();
        assert_eq!(c.inputs.temperature, 300.0);
        assert_eq!(c.inputs.n_waters, 30);
        assert_eq!(c.sim, SimConfig::default());
        assert_eq!(
            c.defaults_applied,
            [
                "temperature", "n_waters", "delta_w", "n_particles", "dt", "tau_end", "seed_amp",
                "init_mode", "rng_seed", "record_stride"
            ]
        );
    }

    #[test]
    fn unknown_key_is_rejected_with_line() {
        let e = parse_config("field_e0z = 100.0\nrho = 1e17\ntemprature = 300\n", &Overrides::default())
            .unwrap_err();
        assert_eq!(e.line, Some(3));
        assert!(e.message.contains("temprature"), "{e}");
    }

    #[test]
    fn syntax_error_has_line() {
        let e = parse_config("rho = 1e17\nfield_e0z = = 3\n", &Overrides::default()).unwrap_err();
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn conflicting_concentration() {
        let e = parse_config(
            "field_e0z = 100.0\nrho = 1e17\nn_ions = 1e4\nvolume = 1e-13\n",
            &Overrides::default(),
        )
        .unwrap_err();
        assert_eq!(e.key.as_deref(), Some("rho"));
        assert_eq!(e.line, Some(2));
        assert!(parse_config("field_e0z = 1.0\nn_ions = 1e4\n", &Overrides::default()).is_err());
    }

    #[test]
    fn conflicting_polarization() {
        let e = parse_config("field_e0z = 1.0\npz_override = 0.1\nrho = 1e17\n", &Overrides::default())
            .unwrap_err();
        assert_eq!(e.key.as_deref(), Some("pz_override"));
        assert_eq!(e.line, Some(2));
        let e = parse_config("rho = 1e17\n", &Overrides::default()).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("field_e0z"));
    }

    #[test]
    fn strong_field_is_out_of_range() {
        let e = parse_config("rho = 1e17\n\nfield_e0z = 2e7\n", &Overrides::default()).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("field_e0z"));
        assert_eq!(e.line, Some(3));
        assert!(e.message.contains("1e7"), "{e}");
    }

    #[test]
    fn bad_values_name_their_key() {
        for (text, key, line) in [
            ("field_e0z = 1.0\nrho = -1.0\n", "rho", 2),
            ("temperature = 0\nfield_e0z = 1.0\nrho = 1e17\n", "temperature", 1),
            ("field_e0z = 1.0\nrho = 1e17\ndt = 0.0\n", "dt", 3),
            ("field_e0z = 1.0\nrho = 1e17\nn_particles = 1\n", "n_particles", 3),
            ("field_e0z = 1.0\nrho = 1e17\nn_waters = 0\n", "n_waters", 3),
            ("field_e0z = 1.0\nrho = 1e17\ndelta_w = 1.5\n", "delta_w", 3),
            ("pz_override = 0.5\nrho = 1e17\n", "pz_override", 1),
            ("field_e0z = 1.0\nrho = 1e17\nvelocity = 4e8\nbunch_length = 1.0\ngain_length = 1.0\n", "velocity", 3),
        ] {
            let e = parse_config(text, &Overrides::default()).unwrap_err();
            assert_eq!(e.key.as_deref(), Some(key), "{text}: {e}");
            assert_eq!(e.line, Some(line), "{text}: {e}");
        }
    }

    #[test]
    fn wrong_type_is_reported() {
        let e = parse_config("field_e0z = \"strong\"\nrho = 1e17\n", &Overrides::default()).unwrap_err();
        assert_eq!(e.line, Some(1));
    }

    #[test]
    fn overrides_win_and_are_not_defaults() {
        let o = Overrides {
            rng_seed: Some(9),
            n_particles: Some(64),
            dt: Some(0.02),
            tau_end: Some(3.0),
        };
        let c = parse_config("field_e0z = 1.0\nrho = 1e17\ndt = 0.5\n", &o).unwrap();
        assert_eq!(c.sim.rng_seed, 9);
        assert_eq!(c.sim.n_particles, 64);
        assert_eq!(c.sim.dt, 0.02);
        assert_eq!(c.sim.tau_end, 3.0);
        for k in ["rng_seed", "n_particles", "dt", "tau_end"] {
            assert!(!c.defaults_applied.iter().any(|d| d == k));
        }
    }

    #[test]
    fn resolved_round_trip_through_summary() {
        let c = parse_config(
            "field_e0z = 100.0\nn_ions = 1e4\nvolume = 7.853981633974483e-14\ninit_mode = \"uniform-random\"\n",
            &Overrides::default(),
        )
        .unwrap();
        let summary = serde_json::json!({
            "resolved_config": c.resolved(),
            "defaults_applied": c.defaults_applied,
        });
        let back = parse_summary(&summary.to_string(), &Overrides::default()).unwrap();
        assert_eq!(back, c);
    }
}
