//! Experiment configuration, replicate orchestration, statistics and
//! report files.

mod config;
mod experiment;
mod report;
mod stats;

pub use config::{ConfigFile, ExperimentConfig};
pub use experiment::{run_experiment, run_experiment_with, run_seed, ExperimentOutcome, RunRecord};
pub use report::{
    load_runs, render_bar_chart, stats_csv, summary_csv, write_report, CHART_FILE, RUNS_DIR,
    STATS_FILE, SUMMARY_FILE,
};
pub use stats::{
    build_report, mean, std_dev, welch_t_test, StatReport, TreatmentStats, WelchResult,
};
