//! Configuration, experiment presets and result emission behind the
//! `dynwave` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod experiment;
pub mod presets;

pub use config::{parse_config, Command, RunConfig};
pub use error::{CliError, Result};
pub use experiment::{emit_csv, ExperimentResult, Verdict};
pub use presets::{run_preset, Preset};
