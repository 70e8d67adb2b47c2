//! Behavior descriptors, sim/real disparity measures and the bounded
//! transferability score.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::testbed::{covered_distance, Trajectory};

/// Default reference disparity for the trajectory measure, mm².
pub const DEFAULT_TRAJECTORY_REF: f64 = 3.0e6;
/// Default reference disparity for the fitness measure, mm.
pub const DEFAULT_FITNESS_REF: f64 = 300.0;

const MIN_DISPLACEMENT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BehaviorDescriptor {
    /// mm
    pub covered_distance: f64,
    /// mm
    pub avg_height: f64,
    /// Direction of the overall displacement, in (-pi, pi].
    pub final_heading: f64,
}

impl BehaviorDescriptor {
    pub fn to_vec(&self) -> Vec<f64> {
        vec![self.covered_distance, self.avg_height, self.final_heading]
    }
}

pub fn extract_descriptors(traj: &Trajectory) -> Result<BehaviorDescriptor> {
    let [dx, dy] = traj.displacement()?;
    let covered_distance = covered_distance(traj)?;
    let avg_height = traj.samples.iter().map(|s| s[2]).sum::<f64>() / traj.len() as f64;
    let final_heading = if covered_distance < MIN_DISPLACEMENT {
        0.0
    } else {
        let h = dy.atan2(dx);
        if h <= -PI {
            PI
        } else {
            h
        }
    };
    Ok(BehaviorDescriptor {
        covered_distance,
        avg_height,
        final_heading,
    })
}

/// Absolute difference of covered distances, mm.
pub fn disparity_fitness(sim: &Trajectory, real: &Trajectory) -> Result<f64> {
    Ok((covered_distance(sim)? - covered_distance(real)?).abs())
}

/// Sum over samples of the squared 3D distance between the two paths, mm².
pub fn disparity_trajectory(sim: &Trajectory, real: &Trajectory) -> Result<f64> {
    if sim.len() != real.len() {
        return Err(Error::SamplingMismatch(format!(
            "{} vs {} samples",
            sim.len(),
            real.len()
        )));
    }
    if sim.dt != real.dt {
        return Err(Error::SamplingMismatch(format!(
            "dt {} vs {}",
            sim.dt, real.dt
        )));
    }
    Ok(sim
        .samples
        .iter()
        .zip(&real.samples)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>())
        .sum())
}

/// Which similarity measure feeds the score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisparityMeasure {
    Fitness,
    Trajectory,
}

impl DisparityMeasure {
    pub fn default_reference(&self) -> f64 {
        match self {
            DisparityMeasure::Fitness => DEFAULT_FITNESS_REF,
            DisparityMeasure::Trajectory => DEFAULT_TRAJECTORY_REF,
        }
    }

    pub fn disparity(&self, sim: &Trajectory, real: &Trajectory) -> Result<f64> {
        match self {
            DisparityMeasure::Fitness => disparity_fitness(sim, real),
            DisparityMeasure::Trajectory => disparity_trajectory(sim, real),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferabilityScore {
    pub disparity: f64,
    pub score: f64,
}

impl TransferabilityScore {
    pub fn new(disparity: f64, reference: f64) -> Result<Self> {
        Ok(Self {
            disparity,
            score: transferability_score(disparity, reference)?,
        })
    }
}

/// Maps a disparity to `1 / (1 + disparity / reference)`, a value in (0, 1].
pub fn transferability_score(disparity: f64, reference: f64) -> Result<f64> {
    if !reference.is_finite() || reference <= 0.0 {
        return Err(Error::Config(format!(
            "reference disparity must be > 0, got {reference}"
        )));
    }
    if disparity.is_nan() || disparity < 0.0 {
        return Err(Error::Config(format!(
            "disparity must be >= 0, got {disparity}"
        )));
    }
    Ok(1.0 / (1.0 + disparity / reference))
}
