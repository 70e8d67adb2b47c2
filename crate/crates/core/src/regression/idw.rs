use serde::{Deserialize, Serialize};

use super::{check_query, check_samples, Normalization, Regressor, Sample};
use crate::error::{Error, Result};

pub const DEFAULT_POWER: f64 = 2.0;

/// Below this normalized distance a query is treated as hitting a sample.
const EXACT_RADIUS: f64 = 1e-9;

/// Shepard interpolation: `sum(w_i * y_i) / sum(w_i)` with
/// `w_i = d_i^-power`, distances taken in z-scored input space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdwModel {
    samples: Vec<Sample>,
    power: f64,
    normalization: Normalization,
}

impl IdwModel {
    pub fn new(samples: Vec<Sample>, power: f64) -> Result<Self> {
        let dim = check_samples(&samples)?;
        if !(power > 0.0 && power.is_finite()) {
            return Err(Error::Config(format!("IDW power must be > 0, got {power}")));
        }
        let normalization = Normalization::fit(samples.iter().map(|s| s.input.as_slice()), dim);
        Ok(Self {
            samples,
            power,
            normalization,
        })
    }

    pub fn with_default_power(samples: Vec<Sample>) -> Result<Self> {
        Self::new(samples, DEFAULT_POWER)
    }

    /// Refits on the current samples plus `sample`.
    pub fn with_sample(&self, sample: Sample) -> Result<Self> {
        let mut samples = self.samples.clone();
        samples.push(sample);
        Self::new(samples, self.power)
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn normalization(&self) -> &Normalization {
        &self.normalization
    }
}

impl Regressor for IdwModel {
    fn predict(&self, x: &[f64]) -> Result<f64> {
        check_query(x, self.normalization.dim())?;
        let mut num = 0.0;
        let mut den = 0.0;
        let mut nearest: Option<(f64, f64)> = None;
        for s in &self.samples {
            let d = self.normalization.distance(x, &s.input);
            if d < EXACT_RADIUS {
                if nearest.is_none_or(|(best, _)| d < best) {
                    nearest = Some((d, s.output));
                }
                continue;
            }
            let w = d.powf(-self.power);
            num += w * s.output;
            den += w;
        }
        if let Some((_, y)) = nearest {
            return Ok(y);
        }
        if den > 0.0 && den.is_finite() {
            Ok(num / den)
        } else {
            // Every weight underflowed: the query is astronomically far away.
            Ok(self.samples.iter().map(|s| s.output).sum::<f64>() / self.samples.len() as f64)
        }
    }
}
