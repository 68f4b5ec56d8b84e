use serde::{Deserialize, Serialize};

use super::AbstractPose;
use crate::error::{Error, Result};
use crate::estimation::Foot;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegGeometry {
    pub thigh: f64,
    pub shank: f64,
    pub hip_width: f64,
    pub eta_range: f64,
}

impl LegGeometry {
    pub fn reach(&self) -> f64 {
        self.thigh + self.shank
    }

    pub fn leg_length(&self, extension: f64) -> f64 {
        self.reach() * (1.0 - extension * self.eta_range)
    }
}

/// Foot position (m) and yaw (rad). Foot pitch and roll follow the trunk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FootPose {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub yaw: f64,
}

impl FootPose {
    /// Re-expresses a trunk-frame foot pose relative to the hip joint of `leg`.
    pub fn hip_relative(&self, leg: Foot, geom: &LegGeometry) -> FootPose {
        FootPose {
            y: self.y - leg.sign() * geom.hip_width / 2.0,
            ..*self
        }
    }
}

/// Trunk-frame foot pose (origin midway between the hip joints) of an abstract leg pose.
pub fn abstract_to_cartesian(a: &AbstractPose, leg: Foot, geom: &LegGeometry) -> FootPose {
    let length = geom.leg_length(a.extension);
    let (ss, cs) = a.swing_sagittal.sin_cos();
    let (sl, cl) = a.swing_lateral.sin_cos();
    FootPose {
        x: length * ss,
        y: leg.sign() * geom.hip_width / 2.0 - a.hip_shift_lateral - length * cs * sl,
        z: -length * cs * cl,
        yaw: a.foot_yaw,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegJointAngles {
    pub hip_yaw: f64,
    pub hip_roll: f64,
    /// Positive swings the thigh forward.
    pub hip_pitch: f64,
    /// Flexion, never negative.
    pub knee: f64,
    /// Set by the parallel linkage so that the sole stays parallel to the trunk.
    pub ankle_pitch: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointLimits {
    pub hip_yaw: (f64, f64),
    pub hip_roll: (f64, f64),
    pub hip_pitch: (f64, f64),
    pub knee: (f64, f64),
    pub ankle_pitch: (f64, f64),
}

impl Default for JointLimits {
    fn default() -> Self {
        JointLimits {
            hip_yaw: (-1.0, 1.0),
            hip_roll: (-0.8, 0.8),
            hip_pitch: (-1.5, 2.0),
            knee: (0.0, 2.6),
            ankle_pitch: (-1.8, 1.8),
        }
    }
}

impl JointLimits {
    pub fn check(&self, j: &LegJointAngles) -> Result<()> {
        let joints = [
            ("hip_yaw", j.hip_yaw, self.hip_yaw),
            ("hip_roll", j.hip_roll, self.hip_roll),
            ("hip_pitch", j.hip_pitch, self.hip_pitch),
            ("knee", j.knee, self.knee),
            ("ankle_pitch", j.ankle_pitch, self.ankle_pitch),
        ];
        for (joint, value, (lo, hi)) in joints {
            if !(lo..=hi).contains(&value) {
                return Err(Error::JointLimit { joint, value });
            }
        }
        Ok(())
    }
}

/// Analytic inverse kinematics of the 5-DoF leg. `target` is relative to the hip joint.
pub fn leg_ik(target: &FootPose, geom: &LegGeometry, limits: &JointLimits) -> Result<LegJointAngles> {
    let (t, s) = (geom.thigh, geom.shank);
    let (sy, cy) = target.yaw.sin_cos();
    // undo the hip yaw
    let x = cy * target.x + sy * target.y;
    let y = -sy * target.x + cy * target.y;
    let z = target.z;

    let dist = (x * x + y * y + z * z).sqrt();
    if dist > geom.reach() * (1.0 + 1e-12) || dist < (t - s).abs() || dist == 0.0 {
        return Err(Error::Unreachable {
            distance: dist,
            reach: geom.reach(),
        });
    }

    let hip_roll = y.atan2(-z);
    let vertical = y.hypot(z);
    let cos_interior = ((t * t + s * s - dist * dist) / (2.0 * t * s)).clamp(-1.0, 1.0);
    let knee = std::f64::consts::PI - cos_interior.acos();
    let cos_thigh = ((t * t + dist * dist - s * s) / (2.0 * t * dist)).clamp(-1.0, 1.0);
    let hip_pitch = x.atan2(vertical) + cos_thigh.acos();

    let joints = LegJointAngles {
        hip_yaw: target.yaw,
        hip_roll,
        hip_pitch,
        knee,
        ankle_pitch: knee - hip_pitch,
    };
    limits.check(&joints)?;
    Ok(joints)
}

/// Forward kinematics of the hip-relative foot pose.
pub fn leg_fk(j: &LegJointAngles, geom: &LegGeometry) -> FootPose {
    let (t, s) = (geom.thigh, geom.shank);
    let x = t * j.hip_pitch.sin() + s * (j.hip_pitch - j.knee).sin();
    let len = t * j.hip_pitch.cos() + s * (j.hip_pitch - j.knee).cos();
    let y = len * j.hip_roll.sin();
    let z = -len * j.hip_roll.cos();
    let (sy, cy) = j.hip_yaw.sin_cos();
    FootPose {
        x: cy * x - sy * y,
        y: sy * x + cy * y,
        z,
        yaw: j.hip_yaw,
    }
}
