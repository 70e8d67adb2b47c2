use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::landscape::Resolution;
use crate::testbed::Peak;
use crate::treatments::{RunSettings, Treatment};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    pub replicates: usize,
    pub treatments: Vec<Treatment>,
    pub settings: RunSettings,
    /// Drop both noise sources from the real evaluator.
    pub noise_free: bool,
    pub resolution: Resolution,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            master_seed: 1,
            replicates: 10,
            treatments: Treatment::ALL.to_vec(),
            settings: RunSettings::default(),
            noise_free: false,
            resolution: Resolution::default(),
            out_dir: PathBuf::from("results"),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be >= 1".into()));
        }
        if self.treatments.is_empty() {
            return Err(Error::Config("at least one treatment is required".into()));
        }
        self.settings.validate()
    }

    /// Run settings with `noise_free` applied.
    pub fn effective_settings(&self) -> RunSettings {
        let mut s = self.settings.clone();
        if self.noise_free {
            s.testbed = s.testbed.noise_free();
        }
        s
    }

    /// Reads a config file and applies it over the defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg = Self::default();
        ConfigFile::load(path)?.apply(&mut cfg)?;
        Ok(cfg)
    }
}

/// The on-disk config: flat `key = value` lines (TOML), every key optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub replicates: Option<usize>,
    pub treatments: Option<Vec<String>>,
    pub budget: Option<usize>,
    pub tau: Option<f64>,
    pub out: Option<PathBuf>,
    pub resolution: Option<String>,
    pub noise_free: Option<bool>,

    pub population_size: Option<usize>,
    pub generations: Option<usize>,
    pub crossover_probability: Option<f64>,
    pub crossover_eta: Option<f64>,
    pub mutation_sd: Option<f64>,
    pub mutation_probability: Option<f64>,
    pub transfer_interval: Option<usize>,
    pub score_reference: Option<f64>,

    /// `[[p1, p2, amplitude, width], ...]`
    pub sim_peaks: Option<Vec<[f64; 4]>>,
    /// `[p1, p2, amplitude, width]`
    pub real_peak: Option<[f64; 4]>,
    pub speed_noise_sd: Option<f64>,
    pub heading_noise_sd: Option<f64>,
    pub base_height: Option<f64>,
    pub bob_amplitude_base: Option<f64>,
    pub deceptive_bob_gain: Option<f64>,
    pub deceptive_bob_width: Option<f64>,
    pub heading_warp_gain: Option<f64>,
    pub duration: Option<f64>,
    pub dt: Option<f64>,
}

fn peak([p1, p2, amplitude, width]: [f64; 4]) -> Peak {
    Peak::new([p1, p2], amplitude, width)
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::parse(path, msg),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn apply(&self, cfg: &mut ExperimentConfig) -> Result<()> {
        macro_rules! set {
            ($($src:ident => $dst:expr),* $(,)?) => {
                $(if let Some(v) = self.$src.clone() { $dst = v; })*
            };
        }
        let s = &mut cfg.settings;
        set! {
            seed => cfg.master_seed,
            replicates => cfg.replicates,
            budget => s.budget,
            tau => s.tau,
            out => cfg.out_dir,
            noise_free => cfg.noise_free,
            population_size => s.evolution.population_size,
            generations => s.evolution.generations,
            crossover_probability => s.evolution.crossover_probability,
            crossover_eta => s.evolution.crossover_eta,
            mutation_sd => s.evolution.mutation_sd,
            mutation_probability => s.evolution.mutation_probability,
            transfer_interval => s.transfer_interval,
            score_reference => s.score_reference,
            speed_noise_sd => s.testbed.speed_noise_sd,
            heading_noise_sd => s.testbed.heading_noise_sd,
            base_height => s.testbed.base_height,
            bob_amplitude_base => s.testbed.bob_amplitude_base,
            deceptive_bob_gain => s.testbed.deceptive_bob_gain,
            deceptive_bob_width => s.testbed.deceptive_bob_width,
            heading_warp_gain => s.testbed.heading_warp_gain,
            duration => s.testbed.duration,
            dt => s.testbed.dt,
        }
        if let Some(peaks) = &self.sim_peaks {
            s.testbed.sim_peaks = peaks.iter().copied().map(peak).collect();
        }
        if let Some(p) = self.real_peak {
            s.testbed.real_peak = peak(p);
        }
        if let Some(names) = &self.treatments {
            cfg.treatments = names.iter().map(|n| n.parse()).collect::<Result<_>>()?;
        }
        if let Some(r) = &self.resolution {
            cfg.resolution = r.parse()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_keeps_defaults() {
        let mut cfg = ExperimentConfig::default();
        ConfigFile::parse("# nothing\n")
            .unwrap()
            .apply(&mut cfg)
            .unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
    }

    #[test]
    fn overrides_apply() {
        let text = r#"
seed = 99
replicates = 3
treatments = ["sim_only", "transferability"]
budget = 7
noise_free = true
resolution = "20x30"
speed_noise_sd = 2.5
real_peak = [0.5, 0.5, 100.0, 0.2]
"#;
        let mut cfg = ExperimentConfig::default();
        ConfigFile::parse(text).unwrap().apply(&mut cfg).unwrap();
        assert_eq!(cfg.master_seed, 99);
        assert_eq!(cfg.replicates, 3);
        assert_eq!(
            cfg.treatments,
            vec![Treatment::SimOnly, Treatment::Transferability]
        );
        assert_eq!(cfg.settings.budget, 7);
        assert!(cfg.noise_free);
        assert_eq!(cfg.resolution, Resolution { nx: 20, ny: 30 });
        assert_eq!(cfg.settings.testbed.speed_noise_sd, 2.5);
        assert_eq!(
            cfg.settings.testbed.real_peak,
            Peak::new([0.5, 0.5], 100.0, 0.2)
        );
        assert_eq!(cfg.effective_settings().testbed.speed_noise_sd, 0.0);
    }

    #[test]
    fn unknown_key_and_treatment_rejected() {
        assert!(ConfigFile::parse("colour = 3").is_err());
        let mut cfg = ExperimentConfig::default();
        let file = ConfigFile::parse(r#"treatments = ["annealing"]"#).unwrap();
        assert!(matches!(
            file.apply(&mut cfg),
            Err(Error::UnknownTreatment(_))
        ));
    }

    #[test]
    fn validation() {
        let mut cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        cfg.replicates = 0;
        assert!(cfg.validate().is_err());
        cfg.replicates = 1;
        cfg.treatments.clear();
        assert!(cfg.validate().is_err());
    }
}
