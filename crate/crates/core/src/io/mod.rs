//! Configuration, output files and the command layer behind the binary.

pub mod commands;
pub mod config;
pub mod manifest;
pub mod series;

pub use commands::{execute, Command};
pub use config::{parse_config, RunConfig};
pub use manifest::{Manifest, MANIFEST_NAME};
pub use series::{read_series, read_series_csv, SeriesTable};

/// Reads and validates a config file.
pub fn load_config(path: &std::path::Path) -> crate::Result<RunConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}
