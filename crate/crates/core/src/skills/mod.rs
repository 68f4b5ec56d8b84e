//! Soccer skills: moving-ball interception and the behavior/game state machines.

mod behavior;
mod game;

pub use behavior::{behavior_step, Action, BehaviorState, World};
pub use game::{game_fsm_step, parse_controller_line, Agent, ControllerMsg, GamePhase, GameState, Secondary};

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Detections kept for the fit, about 0.45 s at camera rate.
pub const TRACK_WINDOW: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackSample {
    pub t: f64,
    pub pos: [f64; 2],
}

/// Sliding window of ball detections with strictly increasing timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct BallTrack {
    samples: VecDeque<TrackSample>,
    window: usize,
}

impl Default for BallTrack {
    fn default() -> Self {
        BallTrack::with_window(TRACK_WINDOW)
    }
}

impl BallTrack {
    pub fn with_window(window: usize) -> Self {
        BallTrack {
            samples: VecDeque::with_capacity(window + 1),
            window: window.max(3),
        }
    }

    pub fn push(&mut self, sample: TrackSample) -> Result<()> {
        if let Some(last) = self.samples.back() {
            if sample.t <= last.t {
                return Err(Error::InvalidInput(format!(
                    "detection at t = {} is not after t = {}",
                    sample.t, last.t
                )));
            }
        }
        self.samples.push_back(sample);
        if self.samples.len() > self.window {
            self.samples.pop_front();
        }
        Ok(())
    }

    pub fn samples(&self) -> impl Iterator<Item = &TrackSample> {
        self.samples.iter()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last_time(&self) -> Option<f64> {
        self.samples.back().map(|s| s.t)
    }

    pub fn clear(&mut self) {
        self.samples.clear();
    }
}

/// Quadratic motion model per axis, time measured from the last sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackFit {
    pub t_ref: f64,
    pub p0: [f64; 2],
    pub v: [f64; 2],
    pub a: [f64; 2],
}

impl TrackFit {
    pub fn position(&self, t: f64) -> [f64; 2] {
        let tau = t - self.t_ref;
        std::array::from_fn(|i| self.p0[i] + self.v[i] * tau + 0.5 * self.a[i] * tau * tau)
    }
}

/// Least-squares fit of `p(t) = p0 + v t + a t^2 / 2` per axis, re-zeroed at the last sample.
pub fn fit_samples(samples: &[TrackSample]) -> Result<TrackFit> {
    if samples.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 samples, got {}", samples.len())));
    }
    let t_ref = samples[samples.len() - 1].t;
    let t_min = samples.iter().map(|s| s.t).fold(f64::INFINITY, f64::min);
    let t_max = samples.iter().map(|s| s.t).fold(f64::NEG_INFINITY, f64::max);
    if !(t_max - t_min > 0.1) {
        return Err(Error::Fit(format!("samples span {:.3} s, need more than 0.1 s", t_max - t_min)));
    }
    let n = samples.len();
    let design = DMatrix::from_fn(n, 3, |r, c| {
        let tau = samples[r].t - t_ref;
        match c {
            0 => 1.0,
            1 => tau,
            _ => 0.5 * tau * tau,
        }
    });
    let svd = design.svd(true, true);
    let rank = svd.rank(1e-12 * svd.singular_values.max());
    if rank < 3 {
        return Err(Error::Fit("timestamps do not determine a quadratic".into()));
    }
    let mut fit = TrackFit {
        t_ref,
        p0: [0.0; 2],
        v: [0.0; 2],
        a: [0.0; 2],
    };
    for axis in 0..2 {
        let b = DVector::from_iterator(n, samples.iter().map(|s| s.pos[axis]));
        let x = svd.solve(&b, 1e-15).map_err(|e| Error::Fit(e.to_string()))?;
        fit.p0[axis] = x[0];
        fit.v[axis] = x[1];
        fit.a[axis] = x[2];
    }
    Ok(fit)
}

pub fn fit_track(track: &BallTrack) -> Result<TrackFit> {
    let samples: Vec<TrackSample> = track.samples().copied().collect();
    fit_samples(&samples)
}

/// Smallest positive `t` with `d0 + v t + a t^2 / 2 = r_trigger`.
pub fn time_of_arrival(d0: f64, v: f64, a: f64, r_trigger: f64) -> Result<f64> {
    if !(d0 > r_trigger) {
        return Err(Error::InvalidInput(format!(
            "ball at {d0} m is already inside the trigger radius {r_trigger} m"
        )));
    }
    let c = d0 - r_trigger;
    if a.abs() < 1e-9 {
        return if v < 0.0 { Ok(-c / v) } else { Err(Error::NeverArrives) };
    }
    let qa = 0.5 * a;
    let disc = v * v - 4.0 * qa * c;
    if disc < 0.0 {
        return Err(Error::NeverArrives);
    }
    let q = -0.5 * (v + v.signum() * disc.sqrt());
    let roots = [q / qa, if q != 0.0 { c / q } else { f64::NAN }];
    roots
        .into_iter()
        .filter(|t| t.is_finite() && *t > 0.0)
        .min_by(|x, y| x.total_cmp(y))
        .ok_or(Error::NeverArrives)
}

/// True when the ball arrives within `margin` of the time the kick needs to reach it.
pub fn kick_trigger(t_arrival: f64, t_kick_exec: f64, margin: f64) -> bool {
    t_arrival <= t_kick_exec + margin && t_arrival >= t_kick_exec - margin
}
