//! Balance feedback on top of the open-loop gait.

mod com_zmp;
mod reference;
mod shaping;
mod swing;

pub use com_zmp::{com_zmp_control, com_zmp_control_axis, com_zmp_system_matrix};
pub use reference::{match_zmp_offset, reference_cpg, ReferenceState};
pub use shaping::{leaky_integrate, rate_limit, LeakyIntegrator, RateLimiter};
pub use swing::{swing_leg_feedback, SwingOffsets};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeedbackGains {
    /// Sagittal swing offset per radian of fused pitch.
    pub k_swing_sagittal: f64,
    /// Lateral swing offset per radian of fused roll.
    pub k_swing_lateral: f64,
    /// CoM position gain, 1/s.
    pub k_c: f64,
    /// ZMP error gain, 1/s.
    pub k_z: f64,
    /// Fade-out window of the swing offsets, as a fraction of the step.
    pub fade_fraction: f64,
    /// Time constant of the leaky integrators, s.
    pub leak_tau: f64,
    /// Bound on the change of the CoM velocity command, (m/s)/s.
    pub rate_max: f64,
    /// High-pass time constant of the logged rate-limiter residual, s.
    pub rate_residual_tau: f64,
    /// Bound on the hip shift from the integrated CoM offset, m.
    pub hip_shift_max: f64,
}

impl Default for FeedbackGains {
    fn default() -> Self {
        FeedbackGains {
            k_swing_sagittal: 0.8,
            k_swing_lateral: 0.6,
            k_c: 5.0,
            k_z: 2.0,
            fade_fraction: 0.25,
            leak_tau: 1.0,
            rate_max: 10.0,
            rate_residual_tau: 0.05,
            hip_shift_max: 0.05,
        }
    }
}

impl FeedbackGains {
    /// `0 < k_z < omega < k_c`, the design condition for the CoM-ZMP controller.
    pub fn satisfies_stability_condition(&self, omega: f64) -> bool {
        0.0 < self.k_z && self.k_z < omega && omega < self.k_c
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("k_swing_sagittal", self.k_swing_sagittal >= 0.0),
            ("k_swing_lateral", self.k_swing_lateral >= 0.0),
            ("k_c", self.k_c >= 0.0),
            ("k_z", self.k_z >= 0.0),
            ("fade_fraction", (0.0..=1.0).contains(&self.fade_fraction)),
            ("leak_tau", self.leak_tau > 0.0),
            ("rate_max", self.rate_max > 0.0),
            ("rate_residual_tau", self.rate_residual_tau > 0.0),
            ("hip_shift_max", self.hip_shift_max >= 0.0),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(Error::config(format!("/controller/gains/{name}"), "out of range"));
            }
        }
        Ok(())
    }
}
