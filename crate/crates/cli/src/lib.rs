//! Batch front end: TOML run configuration, analysis runner, and the
//! `report.json` / `sweep.csv` writers behind the `spinfactor` binary.

pub mod config;
pub mod report;
pub mod run;

pub use config::{parse_time_grid, Analysis, ConfigError, PotentialSpec, RunConfig, TermSpec};
pub use report::{emit, sweep_csv, Check, Report, SweepRow, Verdict, WitnessRecord, SWEEP_HEADER};
pub use run::{build_model, run, sweep_row, Outcome, Prepared};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const CONFIG_ERROR: i32 = 2;
}
