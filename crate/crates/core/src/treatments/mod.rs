//! The transferability loop and the four comparison treatments, each run
//! under a real-evaluation ledger.

mod baselines;
mod budget;
mod transferability;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::behavior::{BehaviorDescriptor, DisparityMeasure, TransferabilityScore};
use crate::controller::ControlParams;
use crate::error::{Error, Result};
use crate::moea::EvolutionConfig;
use crate::seed::EvalSeed;
use crate::testbed::TestbedConfig;

pub use baselines::{run_baseline, BaselineKind};
pub use budget::{Budget, RealLab, SEARCH_STREAM, VALIDATION_STREAM};
pub use transferability::{run_transferability, select_final_solution, select_transfer_candidate};

pub const DEFAULT_BUDGET: usize = 11;
pub const DEFAULT_TAU: f64 = 0.8;
pub const DEFAULT_TRANSFER_INTERVAL: usize = 20;

/// Real trials used by the direct optimization: 4 individuals x 5 generations.
pub const DIRECT_REALITY_EVALS: usize = 20;
/// Hill-climbing steps after the sim-only transfer.
pub const LOCAL_SEARCH_STEPS: usize = 10;
/// Initial design of the surrogate baselines.
pub const SURROGATE_INITIAL_DESIGN: [[f64; 2]; 3] = [[0.5, 0.5], [0.25, 0.75], [0.75, 0.25]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Treatment {
    Transferability,
    DirectReality,
    SimOnly,
    SimPlusLocal,
    SurrogateIdw,
    SurrogateKriging,
}

impl Treatment {
    pub const ALL: [Treatment; 6] = [
        Treatment::Transferability,
        Treatment::DirectReality,
        Treatment::SimOnly,
        Treatment::SimPlusLocal,
        Treatment::SurrogateIdw,
        Treatment::SurrogateKriging,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Treatment::Transferability => "transferability",
            Treatment::DirectReality => "direct_reality",
            Treatment::SimOnly => "sim_only",
            Treatment::SimPlusLocal => "sim_plus_local",
            Treatment::SurrogateIdw => "surrogate_idw",
            Treatment::SurrogateKriging => "surrogate_kriging",
        }
    }

    /// Ledger cap for this treatment given the configured budget. Fixed
    /// protocols carry their own count.
    pub fn real_eval_cap(&self, configured: usize) -> usize {
        match self {
            Treatment::Transferability | Treatment::SurrogateIdw | Treatment::SurrogateKriging => {
                configured
            }
            Treatment::DirectReality => DIRECT_REALITY_EVALS,
            Treatment::SimOnly => 1,
            Treatment::SimPlusLocal => 1 + LOCAL_SEARCH_STEPS,
        }
    }
}

impl fmt::Display for Treatment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Treatment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Treatment::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::UnknownTreatment(s.to_string()))
    }
}

/// Everything a single run needs besides its seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub testbed: TestbedConfig,
    pub evolution: EvolutionConfig,
    pub budget: usize,
    pub tau: f64,
    pub transfer_interval: usize,
    pub measure: DisparityMeasure,
    pub score_reference: f64,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            testbed: TestbedConfig::default(),
            evolution: EvolutionConfig::default(),
            budget: DEFAULT_BUDGET,
            tau: DEFAULT_TAU,
            transfer_interval: DEFAULT_TRANSFER_INTERVAL,
            measure: DisparityMeasure::Trajectory,
            score_reference: DisparityMeasure::Trajectory.default_reference(),
        }
    }
}

impl RunSettings {
    pub fn validate(&self) -> Result<()> {
        self.testbed.validate()?;
        self.evolution.validate()?;
        if self.transfer_interval == 0 {
            return Err(Error::Config("transfer interval must be >= 1".into()));
        }
        if !(self.score_reference > 0.0 && self.score_reference.is_finite()) {
            return Err(Error::Config("score reference must be > 0".into()));
        }
        if !self.tau.is_finite() {
            return Err(Error::Config("tau must be finite".into()));
        }
        Ok(())
    }
}

/// One real-world test of a candidate during the transferability loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferRecord {
    pub genotype: ControlParams,
    pub sim_descriptor: BehaviorDescriptor,
    pub real_fitness: f64,
    pub score: TransferabilityScore,
    pub generation: usize,
    pub seed: EvalSeed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub treatment: Treatment,
    pub seed: u64,
    pub selected: ControlParams,
    /// Covered distance of the selected solution in simulation, mm.
    pub sim_fitness: f64,
    /// Covered distance of the selected solution on the real evaluator, mm.
    pub real_fitness: f64,
    /// Charged real trials.
    pub real_evals_used: usize,
    pub max_real_evals: usize,
    /// Uncharged validation trials (0 or 1).
    pub validation_evals: usize,
    pub transfers: Vec<TransferRecord>,
}

/// Runs one replicate of `treatment` with the given run seed.
pub fn run_treatment(treatment: Treatment, settings: &RunSettings, seed: u64) -> Result<RunResult> {
    match treatment {
        Treatment::Transferability => run_transferability(settings, seed),
        Treatment::DirectReality => run_baseline(BaselineKind::DirectReality, settings, seed),
        Treatment::SimOnly => run_baseline(BaselineKind::SimOnly, settings, seed),
        Treatment::SimPlusLocal => run_baseline(BaselineKind::SimPlusLocal, settings, seed),
        Treatment::SurrogateIdw => run_baseline(BaselineKind::SurrogateIdw, settings, seed),
        Treatment::SurrogateKriging => run_baseline(BaselineKind::SurrogateKriging, settings, seed),
    }
}
