use std::fs;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::seed::{fnv1a, mix};
use crate::treatments::{run_treatment, RunResult, Treatment};

use super::config::ExperimentConfig;
use super::report::write_report;
use super::stats::{build_report, StatReport};

/// One persisted replicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub replicate: usize,
    #[serde(flatten)]
    pub result: RunResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    /// Sorted by treatment name, then replicate.
    pub runs: Vec<RunRecord>,
    pub report: StatReport,
}

/// Seed of one replicate. Depends only on its own coordinates, so adding
/// or removing treatments leaves every other run untouched.
pub fn run_seed(master_seed: u64, treatment: Treatment, replicate: usize) -> u64 {
    mix(
        mix(master_seed, fnv1a(treatment.name().as_bytes())),
        replicate as u64,
    )
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    run_experiment_with(config, Exec::default())
}

/// Runs every (treatment, replicate) pair, then writes the run records,
/// summary, statistics and chart under `config.out_dir`.
pub fn run_experiment_with(config: &ExperimentConfig, exec: Exec) -> Result<ExperimentOutcome> {
    config.validate()?;
    let settings = config.effective_settings();
    let mut treatments = config.treatments.clone();
    treatments.sort_by_key(|t| t.name());
    treatments.dedup();

    fs::create_dir_all(&config.out_dir).map_err(|e| Error::io(&config.out_dir, e))?;

    let jobs: Vec<(Treatment, usize)> = treatments
        .iter()
        .flat_map(|&t| (0..config.replicates).map(move |r| (t, r)))
        .collect();
    let runs = exec.try_map(jobs.len(), |k| {
        let (treatment, replicate) = jobs[k];
        let result = run_treatment(
            treatment,
            &settings,
            run_seed(config.master_seed, treatment, replicate),
        )?;
        Ok::<_, Error>(RunRecord { replicate, result })
    })?;

    let report = build_report(&runs);
    write_report(&report, &runs, &config.out_dir)?;
    Ok(ExperimentOutcome { runs, report })
}
