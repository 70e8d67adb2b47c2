use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::treatments::Treatment;

use super::experiment::RunRecord;

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance (n - 1 denominator); 0 for fewer than two values.
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

pub fn std_dev(xs: &[f64]) -> f64 {
    variance(xs).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WelchResult {
    pub t: f64,
    pub df: f64,
    /// Two-sided.
    pub p: f64,
}

/// Welch's unequal-variance t-test with Welch–Satterthwaite degrees of
/// freedom and a two-sided p-value.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<WelchResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::TooFewSamples(a.len(), b.len()));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (mean(a), mean(b));
    let (va, vb) = (variance(a) / na, variance(b) / nb);
    let se2 = va + vb;
    if se2 == 0.0 {
        return if ma == mb {
            Ok(WelchResult {
                t: 0.0,
                df: na + nb - 2.0,
                p: 1.0,
            })
        } else {
            Err(Error::DegenerateVariance)
        };
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    let dist =
        StudentsT::new(0.0, 1.0, df).map_err(|e| Error::Config(format!("t distribution: {e}")))?;
    let p = (2.0 * dist.sf(t.abs())).clamp(0.0, 1.0);
    Ok(WelchResult { t, df, p })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreatmentStats {
    pub treatment: Treatment,
    pub runs: usize,
    pub mean_real: f64,
    pub sd_real: f64,
    pub mean_sim: f64,
    pub sd_sim: f64,
    /// Against the transferability treatment, when both have enough runs.
    pub vs_transferability: Option<WelchResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub treatments: Vec<TreatmentStats>,
}

impl StatReport {
    pub fn get(&self, t: Treatment) -> Option<&TreatmentStats> {
        self.treatments.iter().find(|s| s.treatment == t)
    }
}

/// Groups runs by treatment (in name order) and summarizes each group.
pub fn build_report(runs: &[RunRecord]) -> StatReport {
    let mut treatments: Vec<Treatment> = runs.iter().map(|r| r.result.treatment).collect();
    treatments.sort_by_key(|t| t.name());
    treatments.dedup();
    let column = |t: Treatment, f: fn(&RunRecord) -> f64| -> Vec<f64> {
        runs.iter()
            .filter(|r| r.result.treatment == t)
            .map(f)
            .collect()
    };
    let reference = column(Treatment::Transferability, |r| r.result.real_fitness);
    let treatments = treatments
        .into_iter()
        .map(|t| {
            let real = column(t, |r| r.result.real_fitness);
            let sim = column(t, |r| r.result.sim_fitness);
            TreatmentStats {
                treatment: t,
                runs: real.len(),
                mean_real: mean(&real),
                sd_real: std_dev(&real),
                mean_sim: mean(&sim),
                sd_sim: std_dev(&sim),
                vs_transferability: welch_t_test(&real, &reference).ok(),
            }
        })
        .collect();
    StatReport { treatments }
}
