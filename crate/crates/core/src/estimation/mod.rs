//! Torso orientation, support leg, pseudo-CoM and pseudo-ZMP estimation.

mod com_filter;
mod complementary;
mod support;

pub use com_filter::{com_kf_update, ComAxisState, ComEstimator, ComState, KfNoise, KfStatus};
pub use complementary::{complementary_update, ComplementaryFilter, ComplementaryGains, ImuSample};
pub use support::{support_update, Foot, SupportState};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fused_angles::Rotation;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicalParams {
    /// Gravitational acceleration, m/s^2.
    pub g: f64,
    /// Height of the pseudo-CoM above the ground, m.
    pub com_height: f64,
    /// Total robot mass, kg. Inferred, not measured.
    pub robot_mass: f64,
    pub foot_half_length: f64,
    pub foot_half_width: f64,
    /// Support exchange hysteresis on the foot height difference, m.
    pub hysteresis_margin: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            g: 9.81,
            com_height: 0.9,
            robot_mass: 19.0,
            foot_half_length: 0.12,
            foot_half_width: 0.07,
            hysteresis_margin: 0.01,
        }
    }
}

impl PhysicalParams {
    /// Natural frequency of the linear inverted pendulum, sqrt(g / com_height).
    pub fn omega(&self) -> f64 {
        (self.g / self.com_height).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("g", self.g > 0.0),
            ("com_height", self.com_height > 0.0),
            ("robot_mass", self.robot_mass > 0.0),
            ("foot_half_length", self.foot_half_length > 0.0),
            ("foot_half_width", self.foot_half_width > 0.0),
            ("hysteresis_margin", self.hysteresis_margin >= 0.0),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(Error::config(format!("/robot/{name}"), "out of range"));
            }
        }
        Ok(())
    }
}

/// Pseudo zero moment point from the pseudo-CoM position and acceleration on one axis.
pub fn pseudo_zmp(c: f64, c_ddot: f64, params: &PhysicalParams) -> f64 {
    c - params.com_height / params.g * c_ddot
}

/// Trunk acceleration rotated into the world frame with gravity removed.
pub fn world_accel_without_gravity(orientation: &Rotation, accel_body: &Vector3<f64>, g: f64) -> Vector3<f64> {
    orientation.as_unit_quaternion().transform_vector(accel_body) - Vector3::new(0.0, 0.0, g)
}

/// Kinematic pseudo-CoM: a fixed offset from the torso frame.
pub fn pseudo_com(torso_position: &Vector3<f64>, orientation: &Rotation, offset: &Vector3<f64>) -> Vector3<f64> {
    torso_position + orientation.as_unit_quaternion().transform_vector(offset)
}
