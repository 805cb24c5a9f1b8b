//! Std companion to `qcopy-core`: shipped scenario presets, parallel trial
//! execution, CSV and text reports, and the `qcopy` command line.

pub mod cli;
pub mod presets;
pub mod report;

use qcopy_core::scenario::{run_trial, PreparedRun, RunReport, Scenario};
use rayon::prelude::*;

/// Run every trial on the rayon pool. Trials are merged in index order, so
/// the report equals the sequential one.
pub fn run_parallel(scenario: &Scenario) -> qcopy_core::Result<RunReport> {
    let prepared = PreparedRun::new(scenario)?;
    let trials = (0..scenario.trials)
        .into_par_iter()
        .map(|t| run_trial(scenario, &prepared, t))
        .collect();
    Ok(RunReport { trials })
}
