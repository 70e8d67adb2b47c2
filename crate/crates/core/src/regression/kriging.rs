use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::{check_query, check_samples, Normalization, Regressor, Sample};
use crate::error::{Error, Result};

pub const DEFAULT_LENGTH_SCALE: f64 = 1.0;
pub const DEFAULT_NUGGET: f64 = 1e-6;

/// Ordinary Kriging with a unit-sill Gaussian covariance over z-scored
/// inputs. The constant mean is estimated by generalized least squares;
/// hyperparameters are fixed.
#[derive(Debug, Clone)]
pub struct KrigingModel {
    inputs: Vec<Vec<f64>>,
    normalization: Normalization,
    length_scale: f64,
    nugget: f64,
    chol: Cholesky<f64, Dyn>,
    /// `K^-1 (y - mean)`
    weights: DVector<f64>,
    /// `K^-1 1`
    inv_ones: DVector<f64>,
    /// `1^T K^-1 1`
    ones_inv_ones: f64,
    mean: f64,
}

impl KrigingModel {
    pub fn fit(samples: &[Sample], length_scale: f64, nugget: f64) -> Result<Self> {
        let dim = check_samples(samples)?;
        if !(length_scale > 0.0 && length_scale.is_finite()) {
            return Err(Error::Config(format!(
                "length scale must be > 0, got {length_scale}"
            )));
        }
        if !(nugget >= 0.0 && nugget.is_finite()) {
            return Err(Error::Config(format!("nugget must be >= 0, got {nugget}")));
        }
        let normalization = Normalization::fit(samples.iter().map(|s| s.input.as_slice()), dim);
        let inputs: Vec<Vec<f64>> = samples
            .iter()
            .map(|s| normalization.apply(&s.input))
            .collect();
        let n = inputs.len();

        if nugget == 0.0 {
            for i in 0..n {
                for j in 0..i {
                    if sq_dist(&inputs[i], &inputs[j]) == 0.0 {
                        return Err(Error::SingularSystem(format!(
                            "samples {j} and {i} share an input and the nugget is 0"
                        )));
                    }
                }
            }
        }

        let k = DMatrix::from_fn(n, n, |i, j| {
            let c = kernel(&inputs[i], &inputs[j], length_scale);
            if i == j {
                c + nugget
            } else {
                c
            }
        });
        let chol = Cholesky::new(k).ok_or_else(|| {
            Error::SingularSystem(format!(
                "covariance matrix is not positive definite with nugget {nugget}; use a larger nugget"
            ))
        })?;

        let y = DVector::from_iterator(n, samples.iter().map(|s| s.output));
        let inv_ones = chol.solve(&DVector::repeat(n, 1.0));
        let ones_inv_ones = inv_ones.sum();
        if !(ones_inv_ones.is_finite() && ones_inv_ones > 0.0) {
            return Err(Error::SingularSystem(
                "covariance matrix is numerically singular; use a larger nugget".into(),
            ));
        }
        let mean = inv_ones.dot(&y) / ones_inv_ones;
        let weights = chol.solve(&y.add_scalar(-mean));
        if !weights.iter().all(|w| w.is_finite()) {
            return Err(Error::SingularSystem(
                "kriging weights are not finite; use a larger nugget".into(),
            ));
        }
        Ok(Self {
            inputs,
            normalization,
            length_scale,
            nugget,
            chol,
            weights,
            inv_ones,
            ones_inv_ones,
            mean,
        })
    }

    pub fn fit_default(samples: &[Sample]) -> Result<Self> {
        Self::fit(samples, DEFAULT_LENGTH_SCALE, DEFAULT_NUGGET)
    }

    /// The generalized-least-squares estimate of the constant mean.
    pub fn estimated_mean(&self) -> f64 {
        self.mean
    }

    pub fn nugget(&self) -> f64 {
        self.nugget
    }

    pub fn normalization(&self) -> &Normalization {
        &self.normalization
    }

    /// Predicted mean and Kriging variance (in units of the unit sill).
    pub fn predict_with_variance(&self, x: &[f64]) -> Result<(f64, f64)> {
        check_query(x, self.normalization.dim())?;
        let z = self.normalization.apply(x);
        let k = DVector::from_iterator(
            self.inputs.len(),
            self.inputs
                .iter()
                .map(|xi| kernel(&z, xi, self.length_scale)),
        );
        let mean = self.mean + k.dot(&self.weights);
        let inv_k = self.chol.solve(&k);
        let drift = 1.0 - self.inv_ones.dot(&k);
        let variance = 1.0 - k.dot(&inv_k) + drift * drift / self.ones_inv_ones;
        Ok((mean, variance.max(0.0)))
    }
}

impl Regressor for KrigingModel {
    fn predict(&self, x: &[f64]) -> Result<f64> {
        check_query(x, self.normalization.dim())?;
        let z = self.normalization.apply(x);
        Ok(self.mean
            + self
                .inputs
                .iter()
                .zip(self.weights.iter())
                .map(|(xi, w)| kernel(&z, xi, self.length_scale) * w)
                .sum::<f64>())
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn kernel(a: &[f64], b: &[f64], length_scale: f64) -> f64 {
    (-sq_dist(a, b) / (2.0 * length_scale * length_scale)).exp()
}
