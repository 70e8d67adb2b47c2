use serde::{Deserialize, Serialize};

use crate::controller::ControlParams;
use crate::error::{Error, Result};
use crate::seed::EvalSeed;
use crate::testbed::{evaluate_reality, TestbedConfig, Trajectory};

/// Stream id reserved for the final validation trial of a run.
pub const VALIDATION_STREAM: u64 = u64::MAX;
/// Stream id of the optimizer's own rng.
pub const SEARCH_STREAM: u64 = u64::MAX - 1;

/// Hard cap on real evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_real_evals: usize,
    pub used: usize,
}

impl Budget {
    pub fn new(max_real_evals: usize) -> Self {
        Self {
            max_real_evals,
            used: 0,
        }
    }

    pub fn remaining(&self) -> usize {
        self.max_real_evals - self.used
    }

    pub fn consume(&mut self) -> Result<()> {
        if self.used >= self.max_real_evals {
            return Err(Error::BudgetExceeded {
                used: self.used,
                max: self.max_real_evals,
            });
        }
        self.used += 1;
        Ok(())
    }
}

/// Gatekeeper for the expensive evaluator. Every trial is charged to the
/// budget and gets its own noise stream; validation trials are not charged.
#[derive(Debug)]
pub struct RealLab<'a> {
    testbed: &'a TestbedConfig,
    run_seed: u64,
    budget: Budget,
    validations: usize,
}

impl<'a> RealLab<'a> {
    pub fn new(testbed: &'a TestbedConfig, run_seed: u64, max_real_evals: usize) -> Self {
        Self {
            testbed,
            run_seed,
            budget: Budget::new(max_real_evals),
            validations: 0,
        }
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn remaining(&self) -> usize {
        self.budget.remaining()
    }

    pub fn validations(&self) -> usize {
        self.validations
    }

    /// One charged trial. Returns the trajectory and the seed it used.
    pub fn trial(&mut self, params: ControlParams) -> Result<(Trajectory, EvalSeed)> {
        let seed = EvalSeed::new(self.run_seed, self.budget.used as u64);
        self.budget.consume()?;
        Ok((evaluate_reality(params, self.testbed, seed), seed))
    }

    /// The single uncharged validation trial of the selected solution.
    pub fn validate(&mut self, params: ControlParams) -> Result<Trajectory> {
        if self.validations > 0 {
            return Err(Error::Config(
                "a run performs at most one validation trial".into(),
            ));
        }
        self.validations += 1;
        Ok(evaluate_reality(
            params,
            self.testbed,
            EvalSeed::new(self.run_seed, VALIDATION_STREAM),
        ))
    }
}
