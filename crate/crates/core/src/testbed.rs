//! Paired evaluators standing in for the simulator and the physical robot.
//!
//! Both map a genotype straight to a planar ray of the body's geometric
//! center. The simulator's speed is a four-peak Gaussian mixture over the
//! genotype square and it bobs unrealistically high around its global
//! optimum; the pseudo-reality has a single peak, a warped heading and
//! run-to-run noise.

use std::f64::consts::{FRAC_PI_2, PI};

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::controller::ControlParams;
use crate::error::{Error, Result};
use crate::seed::EvalSeed;

/// A Gaussian bump over genotype space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub center: [f64; 2],
    /// Peak speed in mm/s.
    pub amplitude: f64,
    pub width: f64,
}

impl Peak {
    pub const fn new(center: [f64; 2], amplitude: f64, width: f64) -> Self {
        Self {
            center,
            amplitude,
            width,
        }
    }

    pub fn value(&self, p: ControlParams) -> f64 {
        self.amplitude * gaussian(p.distance_sq(self.center), self.width)
    }
}

fn gaussian(dist_sq: f64, width: f64) -> f64 {
    (-dist_sq / (2.0 * width * width)).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestbedConfig {
    pub sim_peaks: Vec<Peak>,
    pub real_peak: Peak,
    /// mm/s
    pub speed_noise_sd: f64,
    /// rad
    pub heading_noise_sd: f64,
    /// mm
    pub base_height: f64,
    /// mm
    pub bob_amplitude_base: f64,
    /// mm
    pub deceptive_bob_gain: f64,
    pub deceptive_bob_width: f64,
    /// rad per unit genotype distance from the real peak
    pub heading_warp_gain: f64,
    /// s
    pub duration: f64,
    /// s
    pub dt: f64,
}

impl Default for TestbedConfig {
    fn default() -> Self {
        Self {
            sim_peaks: vec![
                Peak::new([0.15, 0.85], 150.0, 0.10),
                Peak::new([0.70, 0.60], 140.0, 0.12),
                Peak::new([0.45, 0.25], 110.0, 0.10),
                Peak::new([0.85, 0.20], 95.0, 0.08),
            ],
            real_peak: Peak::new([0.70, 0.60], 150.0, 0.15),
            speed_noise_sd: 8.0,
            heading_noise_sd: 0.05,
            base_height: 60.0,
            bob_amplitude_base: 10.0,
            deceptive_bob_gain: 40.0,
            deceptive_bob_width: 0.12,
            heading_warp_gain: 0.6,
            duration: 10.0,
            dt: 0.1,
        }
    }
}

impl TestbedConfig {
    /// Same configuration with both noise sources switched off.
    pub fn noise_free(&self) -> Self {
        Self {
            speed_noise_sd: 0.0,
            heading_noise_sd: 0.0,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidTestbed(msg));
        for (k, peak) in self
            .sim_peaks
            .iter()
            .chain(Some(&self.real_peak))
            .enumerate()
        {
            if !(peak.amplitude >= 0.0 && peak.amplitude.is_finite()) {
                return bad(format!("peak {k}: amplitude must be finite and >= 0"));
            }
            if !(peak.width > 0.0 && peak.width.is_finite()) {
                return bad(format!("peak {k}: width must be > 0"));
            }
            if !peak.center.iter().all(|c| c.is_finite()) {
                return bad(format!("peak {k}: center must be finite"));
            }
        }
        for (name, v) in [
            ("speed_noise_sd", self.speed_noise_sd),
            ("heading_noise_sd", self.heading_noise_sd),
            ("base_height", self.base_height),
            ("bob_amplitude_base", self.bob_amplitude_base),
            ("deceptive_bob_gain", self.deceptive_bob_gain),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("{name} must be finite and >= 0"));
            }
        }
        if !(self.deceptive_bob_width > 0.0 && self.deceptive_bob_width.is_finite()) {
            return bad("deceptive_bob_width must be > 0".into());
        }
        if !self.heading_warp_gain.is_finite() {
            return bad("heading_warp_gain must be finite".into());
        }
        if !(self.dt > 0.0 && self.duration > 0.0 && self.duration.is_finite()) {
            return bad("duration and dt must be > 0".into());
        }
        let steps = self.duration / self.dt;
        if (steps - steps.round()).abs() > 1e-9 {
            return bad(format!(
                "dt = {} does not divide duration = {}",
                self.dt, self.duration
            ));
        }
        Ok(())
    }

    /// Number of samples per trajectory: `duration / dt + 1`.
    pub fn sample_count(&self) -> usize {
        (self.duration / self.dt).round() as usize + 1
    }

    /// Simulated forward speed, mm/s.
    pub fn sim_speed(&self, p: ControlParams) -> f64 {
        self.sim_peaks.iter().map(|peak| peak.value(p)).sum()
    }

    /// Noise-free real forward speed, mm/s.
    pub fn real_speed(&self, p: ControlParams) -> f64 {
        self.real_peak.value(p)
    }

    pub fn sim_heading(&self, p: ControlParams) -> f64 {
        FRAC_PI_2 * (p.p1() - p.p2())
    }

    /// Noise-free real heading.
    pub fn real_heading(&self, p: ControlParams) -> f64 {
        self.sim_heading(p) + self.heading_warp_gain * p.distance_sq(self.real_peak.center).sqrt()
    }

    /// Simulated bobbing amplitude, inflated near the first (deceptive) peak.
    pub fn sim_bob(&self, p: ControlParams) -> f64 {
        let deceptive = self.sim_peaks.first().map_or(0.0, |peak| {
            gaussian(p.distance_sq(peak.center), self.deceptive_bob_width)
        });
        self.bob_amplitude_base + self.deceptive_bob_gain * deceptive
    }

    fn ray(&self, speed: f64, heading: f64, bob: f64) -> Trajectory {
        let (sin, cos) = heading.sin_cos();
        let samples = (0..self.sample_count())
            .map(|k| {
                let t = k as f64 * self.dt;
                let r = speed * t;
                [
                    r * cos,
                    r * sin,
                    self.base_height + bob * (2.0 * PI * t).sin().abs(),
                ]
            })
            .collect();
        Trajectory {
            samples,
            dt: self.dt,
            duration: self.duration,
        }
    }
}

/// Sampled path of the robot's geometric center; positions in mm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<[f64; 3]>,
    pub dt: f64,
    pub duration: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Planar displacement between first and last sample.
    pub fn displacement(&self) -> Result<[f64; 2]> {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) if self.samples.len() >= 2 => Ok([b[0] - a[0], b[1] - a[1]]),
            _ => Err(Error::DegenerateTrajectory(self.samples.len())),
        }
    }
}

/// The cheap, deterministic evaluator.
pub fn simulate(params: ControlParams, cfg: &TestbedConfig) -> Trajectory {
    cfg.ray(
        cfg.sim_speed(params),
        cfg.sim_heading(params),
        cfg.sim_bob(params),
    )
}

/// The expensive evaluator. Speed and heading noise are drawn once per call.
pub fn evaluate_reality(params: ControlParams, cfg: &TestbedConfig, seed: EvalSeed) -> Trajectory {
    let mut rng = seed.rng();
    let mut draw = |sd: f64| match Normal::new(0.0, sd) {
        Ok(n) if sd > 0.0 => n.sample(&mut rng),
        _ => 0.0,
    };
    let speed_noise = draw(cfg.speed_noise_sd);
    let heading_noise = draw(cfg.heading_noise_sd);
    let speed = (cfg.real_speed(params) + speed_noise).max(0.0);
    let heading = cfg.real_heading(params) + heading_noise;
    cfg.ray(speed, heading, cfg.bob_amplitude_base)
}

/// Net planar distance between the first and last samples, in mm.
pub fn covered_distance(traj: &Trajectory) -> Result<f64> {
    let [dx, dy] = traj.displacement()?;
    Ok(dx.hypot(dy))
}
