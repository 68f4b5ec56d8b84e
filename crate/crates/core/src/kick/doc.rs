use serde::{Deserialize, Serialize};

use super::{KickProfile, KickWaveform, KEYPOINTS};
use crate::config::parse_json;
use crate::error::{Error, Result};

/// On-disk and over-the-wire form of a kick profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct WaveformDoc {
    pub v: u32,
    pub retract: KickWaveform,
    pub swing: KickWaveform,
    pub strength: f64,
    pub low_pass_tau: f64,
}

impl Default for WaveformDoc {
    fn default() -> Self {
        WaveformDoc::from(&KickProfile::default())
    }
}

impl From<&KickProfile> for WaveformDoc {
    fn from(p: &KickProfile) -> Self {
        WaveformDoc {
            v: 1,
            retract: p.retract.clone(),
            swing: p.swing.clone(),
            strength: p.strength,
            low_pass_tau: p.low_pass_tau,
        }
    }
}

fn check_waveform(w: &KickWaveform, at: &str) -> Result<()> {
    if w.keypoints.len() != KEYPOINTS {
        return Err(Error::config(
            format!("{at}/keypoints"),
            format!("expected {KEYPOINTS} keypoints, got {}", w.keypoints.len()),
        ));
    }
    if let Some(i) = w.keypoints.iter().position(|k| !(-1.0..=1.0).contains(k)) {
        return Err(Error::config(format!("{at}/keypoints/{i}"), "keypoint outside [-1, 1]"));
    }
    for (name, amp) in [("ampPos", w.amp_pos), ("ampNeg", w.amp_neg)] {
        if !(amp.is_finite() && amp >= 0.0) {
            return Err(Error::config(format!("{at}/{name}"), "amplitude must be finite and non-negative"));
        }
    }
    Ok(())
}

impl WaveformDoc {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: WaveformDoc = parse_json(text)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn validate(&self) -> Result<()> {
        if self.v != 1 {
            return Err(Error::config("/v", format!("unsupported schema version {}", self.v)));
        }
        check_waveform(&self.retract, "/retract")?;
        check_waveform(&self.swing, "/swing")?;
        if !(0.0..=1.0).contains(&self.strength) {
            return Err(Error::config("/strength", "strength outside [0, 1]"));
        }
        if !(self.low_pass_tau.is_finite() && self.low_pass_tau >= 0.0) {
            return Err(Error::config("/lowPassTau", "must be finite and non-negative"));
        }
        Ok(())
    }

    pub fn profile(&self) -> KickProfile {
        KickProfile {
            retract: self.retract.clone(),
            swing: self.swing.clone(),
            strength: self.strength,
            low_pass_tau: self.low_pass_tau,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("waveform doc serializes")
    }
}
