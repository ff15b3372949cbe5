//! Scenario files, sweep execution and result files for the `homdip` tool.

pub mod error;
pub mod run;
pub mod scenario;
pub mod svg;

pub use error::{CliError, ScenarioError};
pub use run::{compute, curve_csv, run, run_fock, RunOptions, RunSummary};
pub use scenario::{parse_scenario, serialize_scenario, Body, Kind, Scenario};

use std::path::Path;

/// Reads and parses a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    Ok(parse_scenario(&text)?)
}
