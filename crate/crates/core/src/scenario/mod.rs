//! Scenario files, builtin scenarios, runs with CSV and summary output.

mod builtin;
mod config;
mod csv_io;
mod run;

pub use builtin::{builtin, BUILTINS};
pub use config::{AfterPulse, IntegratorSection, OutputSection, Precision, PulseSection, ScenarioConfig, SystemSection};
pub use csv_io::{read_csv, CsvRow, CsvSink, CsvTable, CSV_COLUMNS};
pub use run::{
    compare_rows, compare_storage, concurrence_at, run, run_to_dir, switch_time_fs, RunOutput, RunSummary, StorageComparison,
    ONSET_THRESHOLD,
};
