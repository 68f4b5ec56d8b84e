//! In-walk kick: keypoint waveforms superimposed on the swing leg.
//!
//! Two waveforms act on the kicking leg while it swings. `retract` adds to the leg
//! extension and `swing` to the sagittal swing angle. Each waveform has 12 keypoints
//! in [-1, 1], anchored at `phi = i / 11` and scaled per sign by its amplitudes.

mod doc;
mod simulate;

pub use doc::WaveformDoc;
pub use simulate::{kick_phase, simulate_kick, FootSample, KickResult};

use serde::{Deserialize, Serialize};

use crate::gait::AbstractPose;

pub const KEYPOINTS: usize = 12;

/// Strength at which the default profile reproduces the shorter kick of earlier seasons.
pub const LEGACY_STRENGTH: f64 = 0.7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct KickWaveform {
    pub keypoints: Vec<f64>,
    /// Scale of positive keypoint values.
    pub amp_pos: f64,
    /// Scale of negative keypoint values.
    pub amp_neg: f64,
}

impl KickWaveform {
    pub fn zero() -> Self {
        KickWaveform {
            keypoints: vec![0.0; KEYPOINTS],
            amp_pos: 0.0,
            amp_neg: 0.0,
        }
    }

    /// Raw keypoint value interpolated at `phi`, before amplitude scaling.
    pub fn raw(&self, phi: f64) -> f64 {
        let s = phi.clamp(0.0, 1.0) * (KEYPOINTS - 1) as f64;
        let i = (s.floor() as usize).min(KEYPOINTS - 2);
        let frac = s - i as f64;
        let (a, b) = (self.keypoints[i], self.keypoints[i + 1]);
        a + (b - a) * frac
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KickProfile {
    pub retract: KickWaveform,
    pub swing: KickWaveform,
    /// Overall scale in [0, 1], applied to both waveforms.
    pub strength: f64,
    /// Time constant of the smoothing applied to the waveform traces, s.
    pub low_pass_tau: f64,
}

impl Default for KickProfile {
    /// Hand-tuned default: lift and pull the foot back early in the swing, then whip it
    /// through the ball shortly after mid-swing.
    fn default() -> Self {
        KickProfile {
            retract: KickWaveform {
                keypoints: vec![0.0, 0.3, 0.7, 1.0, 1.0, 0.8, 0.5, 0.3, 0.1, 0.0, 0.0, 0.0],
                amp_pos: 0.4,
                amp_neg: 0.0,
            },
            swing: KickWaveform {
                keypoints: vec![0.0, -0.4, -0.8, -1.0, -0.6, 0.2, 0.9, 1.0, 0.7, 0.3, 0.1, 0.0],
                amp_pos: 0.16,
                amp_neg: 0.09,
            },
            strength: 1.0,
            low_pass_tau: 0.01,
        }
    }
}

impl KickProfile {
    pub fn zero() -> Self {
        KickProfile {
            retract: KickWaveform::zero(),
            swing: KickWaveform::zero(),
            strength: 0.0,
            low_pass_tau: 0.0,
        }
    }

    pub fn with_strength(&self, strength: f64) -> Self {
        KickProfile {
            strength: strength.clamp(0.0, 1.0),
            ..self.clone()
        }
    }
}

/// Waveform value at kick phase `phi` (clamped to [0, 1]).
pub fn eval_waveform(w: &KickWaveform, phi: f64) -> f64 {
    let raw = w.raw(phi);
    if raw >= 0.0 {
        raw * w.amp_pos
    } else {
        raw * w.amp_neg
    }
}

/// First-order low-pass of a uniformly sampled trace, starting from the first sample.
pub fn low_pass_trace(samples: &[f64], low_pass_tau: f64, dt: f64) -> Vec<f64> {
    let beta = if low_pass_tau > 0.0 { (-dt / low_pass_tau).exp() } else { 0.0 };
    let mut out = Vec::with_capacity(samples.len());
    let mut y = samples.first().copied().unwrap_or(0.0);
    for &x in samples {
        y = beta * y + (1.0 - beta) * x;
        out.push(y);
    }
    out
}

/// Adds extension and sagittal swing offsets to a swing-leg pose.
pub fn apply_kick_offsets(base: &AbstractPose, d_extension: f64, d_swing: f64) -> AbstractPose {
    AbstractPose {
        extension: (base.extension + d_extension).clamp(0.0, 1.0),
        swing_sagittal: base.swing_sagittal + d_swing,
        ..*base
    }
}

pub fn superimpose_kick(base: &AbstractPose, profile: &KickProfile, phi: f64) -> AbstractPose {
    apply_kick_offsets(
        base,
        profile.strength * eval_waveform(&profile.retract, phi),
        profile.strength * eval_waveform(&profile.swing, phi),
    )
}
