//! Experiment driver: run configuration, single-run execution, seed
//! batches, and statistical comparison reporting.

mod batch;
mod config;
mod report;
mod runner;

pub use batch::{run_batch, BatchOutcome, RunKey};
pub use config::{parse_config_file, parse_config_text, FileConfig, RunConfig, Variant};
pub use report::{
    collect_summaries, compare_table, emit_traces, ComparisonTable, SampleMap, SIGNIFICANCE,
};
pub use runner::{
    parse_summary, run_rng, run_single, run_stem, trace_csv, write_run_files, RunResult,
    RunSummary, SnapshotMember, TraceRow,
};
