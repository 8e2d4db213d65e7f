//! Command-line front end: configuration, scenario pipeline and file output.

pub mod config;
pub mod output;
pub mod pipeline;
pub mod plot;
pub mod sweep;
pub mod verify;

use config::ConfigError;

/// Bundled axon preset.
pub const AXON_PRESET: &str = include_str!("../presets/axon.toml");

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BLOWUP: i32 = 3;
pub const EXIT_MECHANISM_OFF: i32 = 4;

/// Process exit code for an error raised anywhere in the pipeline.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.downcast_ref::<ConfigError>().is_some() {
            return EXIT_CONFIG;
        }
        if let Some(e) = cause.downcast_ref::<solvfel::Error>() {
            return match e {
                solvfel::Error::NumericalBlowup { .. } | solvfel::Error::SingularField { .. } => EXIT_BLOWUP,
                solvfel::Error::MechanismOff => EXIT_MECHANISM_OFF,
                solvfel::Error::InvalidParameter { .. } | solvfel::Error::OutOfRange { .. } => EXIT_CONFIG,
                _ => EXIT_FAILURE,
            };
        }
    }
    EXIT_FAILURE
}
