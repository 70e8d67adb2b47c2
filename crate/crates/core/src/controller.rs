//! Sinusoidal motor set-points for the 8-DOF quadruped.
//!
//! Every motor follows
//! `alpha(i, t) = A * dir(i) * p1 - A * p2 * sin(2*pi*t - phi(i))` with
//! `A = 5*pi/12`, clamped to `[-A, A]`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Joint amplitude and saturation limit, in radians.
pub const MAX_ANGLE: f64 = 5.0 * PI / 12.0;

/// The two-parameter genotype. Both values lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct ControlParams {
    p1: f64,
    p2: f64,
}

impl ControlParams {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        check_unit("p1", p1)?;
        check_unit("p2", p2)?;
        Ok(Self { p1, p2 })
    }

    /// Builds params by clamping each coordinate into `[0, 1]`.
    ///
    /// NaN maps to 0.
    pub fn clamped(p1: f64, p2: f64) -> Self {
        let c = |v: f64| if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
        Self {
            p1: c(p1),
            p2: c(p2),
        }
    }

    pub fn center() -> Self {
        Self { p1: 0.5, p2: 0.5 }
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn as_array(&self) -> [f64; 2] {
        [self.p1, self.p2]
    }

    pub fn distance_sq(&self, other: [f64; 2]) -> f64 {
        let d1 = self.p1 - other[0];
        let d2 = self.p2 - other[1];
        d1 * d1 + d2 * d2
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange { name, value })
    }
}

impl TryFrom<[f64; 2]> for ControlParams {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Self::new(v[0], v[1])
    }
}

impl From<ControlParams> for [f64; 2] {
    fn from(p: ControlParams) -> Self {
        p.as_array()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Leg {
    FrontRight,
    FrontLeft,
    RearRight,
    RearLeft,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Joint {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MotorId {
    pub leg: Leg,
    pub joint: Joint,
}

impl MotorId {
    pub const ALL: [MotorId; 8] = {
        use Joint::*;
        use Leg::*;
        [
            MotorId {
                leg: FrontRight,
                joint: Upper,
            },
            MotorId {
                leg: FrontRight,
                joint: Lower,
            },
            MotorId {
                leg: FrontLeft,
                joint: Upper,
            },
            MotorId {
                leg: FrontLeft,
                joint: Lower,
            },
            MotorId {
                leg: RearRight,
                joint: Upper,
            },
            MotorId {
                leg: RearRight,
                joint: Lower,
            },
            MotorId {
                leg: RearLeft,
                joint: Upper,
            },
            MotorId {
                leg: RearLeft,
                joint: Lower,
            },
        ]
    };

    /// +1 for both motors of the front-right and rear-left legs, -1 otherwise.
    pub fn direction(&self) -> f64 {
        match self.leg {
            Leg::FrontRight | Leg::RearLeft => 1.0,
            Leg::FrontLeft | Leg::RearRight => -1.0,
        }
    }

    pub fn phase(&self) -> f64 {
        match self.joint {
            Joint::Upper => 0.0,
            Joint::Lower => FRAC_PI_2,
        }
    }
}

/// Desired angle of `motor` at time `t` (seconds), in radians.
pub fn motor_setpoint(params: ControlParams, motor: MotorId, t: f64) -> f64 {
    let offset = MAX_ANGLE * motor.direction() * params.p1;
    let swing = MAX_ANGLE * params.p2 * (2.0 * PI * t - motor.phase()).sin();
    saturate(offset - swing)
}

pub fn saturate(angle: f64) -> f64 {
    angle.clamp(-MAX_ANGLE, MAX_ANGLE)
}
