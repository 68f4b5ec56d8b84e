//! Open-loop central pattern generator gait.
//!
//! Gait phase convention: `mu` in [-pi, 0) is the left swing, [0, pi) the right swing.
//! Each leg runs on its own leg phase (left = `mu`, right = `mu + pi`) and swings while
//! its leg phase is negative.

mod kinematics;
mod waveforms;

pub use kinematics::{abstract_to_cartesian, leg_fk, leg_ik, FootPose, JointLimits, LegGeometry, LegJointAngles};
pub use waveforms::{abstract_waveforms, AbstractPose};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::Foot;
use crate::fused_angles::wrap_angle;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaitPhase {
    pub mu: f64,
    /// Gait frequency, full cycles per second.
    pub frequency: f64,
}

impl GaitPhase {
    pub fn new(mu: f64, frequency: f64) -> Self {
        GaitPhase {
            mu: wrap_angle(mu),
            frequency,
        }
    }

    /// Leg phase of the given leg; the legs are exactly pi apart.
    pub fn leg_phase(&self, leg: Foot) -> f64 {
        match leg {
            Foot::Left => self.mu,
            Foot::Right => wrap_angle(self.mu + PI),
        }
    }

    pub fn swing_leg(&self) -> Foot {
        if self.mu < 0.0 {
            Foot::Left
        } else {
            Foot::Right
        }
    }

    pub fn support_leg(&self) -> Foot {
        self.swing_leg().other()
    }

    /// Progress through the current step, in [0, 1).
    pub fn step_progress(&self) -> f64 {
        let p = if self.mu < 0.0 { (self.mu + PI) / PI } else { self.mu / PI };
        p.clamp(0.0, 1.0)
    }

    pub fn step_duration(&self) -> f64 {
        0.5 / self.frequency
    }
}

pub fn advance_phase(p: &GaitPhase, dt: f64) -> GaitPhase {
    GaitPhase {
        mu: wrap_angle(p.mu + 2.0 * PI * p.frequency * dt),
        frequency: p.frequency,
    }
}

/// Normalized walking velocity command. Components are clamped to [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaitCommand {
    pub vx: f64,
    pub vy: f64,
    pub omega: f64,
}

impl GaitCommand {
    pub fn new(vx: f64, vy: f64, omega: f64) -> Self {
        GaitCommand {
            vx: vx.clamp(-1.0, 1.0),
            vy: vy.clamp(-1.0, 1.0),
            omega: omega.clamp(-1.0, 1.0),
        }
    }

    pub fn mirrored(&self) -> Self {
        GaitCommand::new(self.vx, -self.vy, -self.omega)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaitParams {
    pub frequency: f64,
    /// Leg extension held by the support leg (0 = fully extended).
    pub eta_stance: f64,
    /// Peak extension of the swing leg.
    pub eta_max: f64,
    /// Fraction of the full leg length removed at extension 1.
    pub eta_range: f64,
    /// Sagittal swing amplitude at full forward command, rad.
    pub swing_sagittal_max: f64,
    /// Lateral swing amplitude at full sideways command, rad.
    pub swing_lateral_max: f64,
    /// Foot yaw amplitude at full turning command, rad.
    pub yaw_max: f64,
    /// Lateral hip shift amplitude, m.
    pub hip_shift_amplitude: f64,
    /// Bound on feedback offsets added to the swing angles, rad.
    pub swing_offset_max: f64,
    pub thigh: f64,
    pub shank: f64,
    pub hip_width: f64,
    /// Walking command used by scenarios that do not plan their own.
    pub command: GaitCommand,
}

impl Default for GaitParams {
    fn default() -> Self {
        GaitParams {
            frequency: 1.4,
            eta_stance: 0.05,
            eta_max: 0.12,
            eta_range: 0.25,
            swing_sagittal_max: 0.12,
            swing_lateral_max: 0.08,
            yaw_max: 0.15,
            hip_shift_amplitude: 0.02,
            swing_offset_max: 0.45,
            thigh: 0.42,
            shank: 0.42,
            hip_width: 0.2,
            command: GaitCommand::default(),
        }
    }
}

impl GaitParams {
    pub fn geometry(&self) -> LegGeometry {
        LegGeometry {
            thigh: self.thigh,
            shank: self.shank,
            hip_width: self.hip_width,
            eta_range: self.eta_range,
        }
    }

    pub fn step_duration(&self) -> f64 {
        0.5 / self.frequency
    }

    /// Leg length of the support leg, i.e. the hip height above the ground.
    pub fn stance_leg_length(&self) -> f64 {
        (self.thigh + self.shank) * (1.0 - self.eta_stance * self.eta_range)
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("frequency", self.frequency > 0.0),
            ("eta_stance", (0.0..=1.0).contains(&self.eta_stance)),
            ("eta_max", (self.eta_stance..=1.0).contains(&self.eta_max)),
            ("eta_range", (0.0..1.0).contains(&self.eta_range)),
            ("swing_sagittal_max", self.swing_sagittal_max >= 0.0),
            ("swing_lateral_max", self.swing_lateral_max >= 0.0),
            ("yaw_max", self.yaw_max >= 0.0),
            ("hip_shift_amplitude", self.hip_shift_amplitude >= 0.0),
            ("swing_offset_max", self.swing_offset_max >= 0.0),
            ("thigh", self.thigh > 0.0),
            ("shank", self.shank > 0.0),
            ("hip_width", self.hip_width > 0.0),
            ("command/vx", self.command.vx.abs() <= 1.0),
            ("command/vy", self.command.vy.abs() <= 1.0),
            ("command/omega", self.command.omega.abs() <= 1.0),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(Error::config(format!("/gait/{name}"), "out of range"));
            }
        }
        Ok(())
    }
}
