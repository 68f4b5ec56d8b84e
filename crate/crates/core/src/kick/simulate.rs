use std::f64::consts::PI;

use serde::Serialize;

use super::{apply_kick_offsets, eval_waveform, low_pass_trace, KickProfile};
use crate::estimation::{Foot, PhysicalParams};
use crate::gait::{abstract_to_cartesian, abstract_waveforms, GaitCommand, GaitParams, GaitPhase};
use crate::sim::{stopping_distance, BallModel};

const KICK_DT: f64 = 0.001;

/// Kick phase of a leg: linear over the leg's swing, `None` while it supports.
pub fn kick_phase(leg_phase: f64) -> Option<f64> {
    (leg_phase < 0.0).then(|| ((leg_phase + PI) / PI).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FootSample {
    pub t: f64,
    /// Kick phase, absent outside the kicking swing.
    pub phi: Option<f64>,
    /// Forward position of the kicking foot, m.
    pub x: f64,
    /// Height of the sole above the ground, m.
    pub z: f64,
    /// Forward foot speed, m/s.
    pub speed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KickResult {
    pub peak_foot_speed: f64,
    pub contact_speed: f64,
    pub launch_speed: f64,
    pub predicted_distance: f64,
    /// Time from the start of the kicking swing to ball contact.
    pub contact_time: Option<f64>,
    pub foot_trace: Vec<FootSample>,
}

impl KickResult {
    pub fn has_contact(&self) -> bool {
        self.contact_time.is_some()
    }
}

/// Runs one gait cycle in place with `profile` on the left leg's swing and a ball at rest
/// `ball.placement_gap` in front of the left toe.
pub fn simulate_kick(profile: &KickProfile, gait: &GaitParams, physical: &PhysicalParams, ball: &BallModel) -> KickResult {
    let geom = gait.geometry();
    let cmd = GaitCommand::default();
    let n = (1.0 / (gait.frequency * KICK_DT)).round() as usize;
    let ground = -gait.stance_leg_length();

    let phases: Vec<GaitPhase> = (0..n)
        .map(|k| GaitPhase::new(-PI + 2.0 * PI * gait.frequency * k as f64 * KICK_DT, gait.frequency))
        .collect();
    let phis: Vec<Option<f64>> = phases.iter().map(|p| kick_phase(p.leg_phase(Foot::Left))).collect();
    let raw = |f: &dyn Fn(f64) -> f64| -> Vec<f64> { phis.iter().map(|p| p.map_or(0.0, f) * profile.strength).collect() };
    let retract = low_pass_trace(&raw(&|p| eval_waveform(&profile.retract, p)), profile.low_pass_tau, KICK_DT);
    let swing = low_pass_trace(&raw(&|p| eval_waveform(&profile.swing, p)), profile.low_pass_tau, KICK_DT);

    let toe_rest = physical.foot_half_length;
    let ball_x = toe_rest + ball.radius + ball.placement_gap;

    let mut trace = Vec::with_capacity(n);
    let mut contact: Option<(f64, f64)> = None;
    let mut peak: f64 = 0.0;
    let mut prev_x: Option<f64> = None;
    for k in 0..n {
        let (left, _) = abstract_waveforms(&phases[k], &cmd, gait);
        let pose = apply_kick_offsets(&left, retract[k], swing[k]);
        let foot = abstract_to_cartesian(&pose, Foot::Left, &geom);
        let t = k as f64 * KICK_DT;
        let speed = prev_x.map_or(0.0, |px| (foot.x - px) / KICK_DT);
        prev_x = Some(foot.x);
        let z = foot.z - ground;
        peak = peak.max(speed);
        if contact.is_none() && speed > 0.0 && foot.x + toe_rest >= ball_x - ball.radius && z <= 2.0 * ball.radius {
            contact = Some((t, speed));
        }
        trace.push(FootSample {
            t,
            phi: phis[k],
            x: foot.x,
            z,
            speed,
        });
    }

    let (contact_time, contact_speed) = match contact {
        Some((t, v)) => (Some(t), v),
        None => (None, 0.0),
    };
    let launch_speed = ball.restitution * contact_speed;
    KickResult {
        peak_foot_speed: peak,
        contact_speed,
        launch_speed,
        predicted_distance: stopping_distance(launch_speed, ball, physical.g),
        contact_time,
        foot_trace: trace,
    }
}
