//! Experiment harness: parameter sweeps, CSV records and their analysis.

pub mod analysis;
pub mod config;
pub mod sweep;

pub use analysis::{
    analyze, fit_rounds_vs_edges, fit_strata, linear_fit, p_fraction_correlation, spearman, threshold_group,
    threshold_report, AnalysisReport, LinearFit, Stratum, ThresholdBucket,
};
pub use config::{DeltaRule, SweepConfig};
pub use sweep::{
    read_records, records_to_csv, run_game, run_on_graphs, run_sweep, run_task, sweep_tasks, write_records, RunRecord,
    SweepTask, CSV_HEADER,
};
