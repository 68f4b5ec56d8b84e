use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{GaitCommand, GaitParams, GaitPhase};
use crate::estimation::Foot;

/// Leg pose in abstract space.
///
/// Swing angles are positive in the direction the trunk moves for a positive fused
/// angle: `swing_sagittal > 0` puts the foot forward, `swing_lateral > 0` puts it to
/// the right.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbstractPose {
    /// Leg retraction in [0, 1], 0 = fully extended.
    pub extension: f64,
    pub swing_sagittal: f64,
    pub swing_lateral: f64,
    /// Lateral displacement of the hips relative to the feet, m (positive = left).
    pub hip_shift_lateral: f64,
    pub foot_yaw: f64,
    /// The parallel leg linkage keeps the foot parallel to the trunk.
    pub foot_pitch_locked: bool,
}

impl AbstractPose {
    pub fn neutral() -> Self {
        AbstractPose {
            extension: 0.0,
            swing_sagittal: 0.0,
            swing_lateral: 0.0,
            hip_shift_lateral: 0.0,
            foot_yaw: 0.0,
            foot_pitch_locked: true,
        }
    }

    /// Left/right mirror image: lateral quantities and yaw change sign.
    pub fn mirrored(&self) -> Self {
        AbstractPose {
            swing_lateral: -self.swing_lateral,
            hip_shift_lateral: -self.hip_shift_lateral,
            foot_yaw: -self.foot_yaw,
            ..*self
        }
    }
}

fn leg_pose(leg_phase: f64, leg: Foot, cmd: &GaitCommand, params: &GaitParams) -> AbstractPose {
    let extension = if leg_phase < 0.0 {
        let s = (leg_phase + PI) / PI;
        let bump = 0.5 * (1.0 - (2.0 * PI * s).cos());
        params.eta_stance + (params.eta_max - params.eta_stance) * bump
    } else {
        params.eta_stance
    };
    // -sin peaks at mid-swing (leg phase -pi/2) and reaches the opposite extreme at mid-stance
    let wave = -leg_phase.sin();
    AbstractPose {
        extension,
        swing_sagittal: params.swing_sagittal_max * cmd.vx * wave,
        swing_lateral: -params.swing_lateral_max * cmd.vy * wave,
        hip_shift_lateral: -leg.sign() * params.hip_shift_amplitude * wave,
        foot_yaw: params.yaw_max * cmd.omega * wave,
        foot_pitch_locked: true,
    }
}

/// Nominal abstract poses `(left, right)` of both legs.
pub fn abstract_waveforms(phase: &GaitPhase, cmd: &GaitCommand, params: &GaitParams) -> (AbstractPose, AbstractPose) {
    (
        leg_pose(phase.leg_phase(Foot::Left), Foot::Left, cmd, params),
        leg_pose(phase.leg_phase(Foot::Right), Foot::Right, cmd, params),
    )
}
