//! Sweeps, figure presets and result files for the qudit cooling engine.
//!
//! A run takes a [`SweepSpec`] (a base protocol plus parameter axes),
//! executes every grid point in parallel and writes one CSV of
//! [`ResultRow`]s with a JSON manifest beside it. Output is byte-identical
//! for any worker count.

pub mod classify;
pub mod error;
pub mod oracle_check;
pub mod presets;
pub mod rows;
pub mod runner;
pub mod spectrum;
pub mod sweep;

pub use classify::{classify_regions, PanelSummary, DEFAULT_THRESHOLD};
pub use error::{ExperimentError, Result, ValidationError};
pub use oracle_check::{oracle_check, Mutation, OracleReport};
pub use presets::{preset, PresetOptions, PRESET_IDS};
pub use rows::{read_rows, write_rows, ResultRow, COLUMNS};
pub use runner::{run_sweeps, Artifacts, SweepRun};
pub use sweep::{Axes, GridPoint, IntAxis, RealAxis, SweepSpec};

use std::path::Path;

/// Loads a sweep file, runs it and writes the results into `out`, falling
/// back to the file's own `outputs` directory.
pub fn run_config(path: &Path, out: Option<&Path>, workers: Option<usize>) -> Result<(SweepRun, Artifacts)> {
    let text = std::fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
    let spec = SweepSpec::from_json(&text)?;
    let out = match (out, &spec.outputs) {
        (Some(dir), _) => dir.to_path_buf(),
        (None, Some(dir)) => dir.clone(),
        (None, None) => return Err(ExperimentError::validation("outputs", "no output directory given")),
    };
    let run = run_sweeps(spec.id(), std::slice::from_ref(&spec), workers)?;
    let artifacts = run.write(&out, &[])?;
    Ok((run, artifacts))
}

/// Runs a named preset and writes its results and derived tables into `out`.
pub fn run_preset(
    id: &str,
    options: PresetOptions,
    out: &Path,
    workers: Option<usize>,
) -> Result<(SweepRun, Artifacts)> {
    let sweeps = preset(id, options)?;
    let run = run_sweeps(id, &sweeps, workers)?;
    let derived = presets::derived_tables(&run)?;
    let artifacts = run.write(out, &derived)?;
    Ok((run, artifacts))
}
