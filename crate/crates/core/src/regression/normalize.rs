use serde::{Deserialize, Serialize};

/// Per-dimension z-score transform fitted on a set of points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub mean: Vec<f64>,
    pub sd: Vec<f64>,
}

impl Normalization {
    /// Fits mean and population standard deviation per dimension. A
    /// dimension without spread gets `sd = 1`.
    pub fn fit<'a, I>(points: I, dim: usize) -> Self
    where
        I: IntoIterator<Item = &'a [f64]> + Clone,
    {
        let mut n = 0usize;
        let mut mean = vec![0.0; dim];
        for p in points.clone() {
            n += 1;
            for (m, v) in mean.iter_mut().zip(p) {
                *m += v;
            }
        }
        if n == 0 {
            return Self::identity(dim);
        }
        mean.iter_mut().for_each(|m| *m /= n as f64);
        let mut var = vec![0.0; dim];
        for p in points {
            for ((acc, v), m) in var.iter_mut().zip(p).zip(&mean) {
                *acc += (v - m) * (v - m);
            }
        }
        let sd = var
            .iter()
            .zip(&mean)
            .map(|(v, m)| {
                let sd = (v / n as f64).sqrt();
                // Round-off on constant columns leaves ~1e-17 spread.
                if sd <= 1e-12 * m.abs().max(1.0) {
                    1.0
                } else {
                    sd
                }
            })
            .collect();
        Self { mean, sd }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mean: vec![0.0; dim],
            sd: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.mean.iter().zip(&self.sd))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    /// Euclidean distance between two raw points in normalized space.
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .zip(&self.sd)
            .map(|((x, y), s)| {
                let d = (x - y) / s;
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }
}
