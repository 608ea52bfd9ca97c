//! Experiment harness: run every (instance, algorithm, repetition) cell,
//! persist one CSV record per run, and reduce the records to the three
//! comparison views (cactus series, tries/flips per solution, solve rate).

mod analysis;
mod config;
mod harvest;
mod record;
mod suite;

pub use analysis::{
    cactus_data, render_report, solve_percentage, tries_flips_summary, wilson_interval,
    CactusPoint, TriesFlips, UnknownInstance,
};
pub use config::{AlgoSettings, GeneratorSpec, SuiteConfig, SuiteConfigError};
pub use harvest::{harvest_hard_instances, HardInstance, HarvestConfig};
pub use record::{read_records, RecordWriter, RunRecord, RECORD_HEADER};
pub use suite::{cell_seed, load_instances, run_suite, HarnessError, Instance, SkippedInstance};
