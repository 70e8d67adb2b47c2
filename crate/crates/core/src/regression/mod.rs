//! Regression models used as the learned transferability function and as
//! fitness surrogates.

mod idw;
mod kriging;
mod normalize;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use idw::{IdwModel, DEFAULT_POWER};
pub use kriging::{KrigingModel, DEFAULT_LENGTH_SCALE, DEFAULT_NUGGET};
pub use normalize::Normalization;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub input: Vec<f64>,
    pub output: f64,
}

impl Sample {
    pub fn new(input: Vec<f64>, output: f64) -> Self {
        Self { input, output }
    }
}

/// A fitted model that maps an input vector to a scalar.
pub trait Regressor {
    fn predict(&self, x: &[f64]) -> Result<f64>;
}

/// Checks that samples are non-empty, finite and share one dimension.
pub(crate) fn check_samples(samples: &[Sample]) -> Result<usize> {
    let dim = samples.first().ok_or(Error::EmptyModel)?.input.len();
    for s in samples {
        if s.input.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: s.input.len(),
            });
        }
        if !s.output.is_finite() || !s.input.iter().all(|v| v.is_finite()) {
            return Err(Error::Config("sample contains a non-finite value".into()));
        }
    }
    Ok(dim)
}

pub(crate) fn check_query(x: &[f64], dim: usize) -> Result<()> {
    if x.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: x.len(),
        });
    }
    if !x.iter().all(|v| v.is_finite()) {
        return Err(Error::Config("query contains a non-finite value".into()));
    }
    Ok(())
}
