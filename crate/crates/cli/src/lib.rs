//! Command-line front end for `pdifmp-core`: parameter presets, CSV output,
//! timing and a rayon-backed path executor.

pub mod error;
pub mod exec;
pub mod presets;
pub mod rows;
pub mod run;

pub use error::{Error, Result};
pub use exec::RayonExecutor;
pub use presets::{Cell, Preset, PresetKind, ScenarioRun, PRESETS};
pub use rows::{read_csv, write_csv, write_csv_file, BenchRow, PathRow, ResultRow};
pub use run::{
    bench, mean_times, price_cell, result_row, run_experiment, scenario_runs, simulate_paths, ExperimentSpec,
};
