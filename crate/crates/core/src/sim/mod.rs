//! Deterministic reduced-order simulation.
//!
//! Planar decoupled LIPM for the CoM, pendulum impulses for pushes and a rolling-friction
//! ball. Scenarios wire the gait, estimation and stabilization stacks onto this plant.

mod log;
mod scenario;
mod walker;

pub use log::{Summary, TrajectoryLog, TrajectoryRow, CSV_HEADER};
pub use scenario::{
    push_ladder, run_push, run_scenario, run_scenario_with_messages, BallConfig, ControllerConfig, LadderEntry,
    PendulumConfig, ScenarioConfig, ScenarioKind, SIM_DT,
};
pub use walker::{PlantParams, Walker, WalkerStatus};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::PhysicalParams;

/// Exact discrete map of `c_ddot = omega^2 (c - p)` over `dt` for constant `p`.
pub fn lipm_step(c: f64, c_dot: f64, p: f64, params: &PhysicalParams, dt: f64) -> (f64, f64) {
    let w = params.omega();
    let (sh, ch) = ((w * dt).sinh(), (w * dt).cosh());
    let e = c - p;
    (p + e * ch + c_dot / w * sh, e * w * sh + c_dot * ch)
}

/// Orbital energy `c_dot^2 / 2 - omega^2 (c - p)^2 / 2`, conserved by [`lipm_step`].
pub fn orbital_energy(c: f64, c_dot: f64, p: f64, params: &PhysicalParams) -> f64 {
    let w = params.omega();
    0.5 * c_dot * c_dot - 0.5 * w * w * (c - p) * (c - p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PendulumSpec {
    pub mass: f64,
    pub cord_length: f64,
    /// Horizontal distance of the bob from its rest position when released.
    pub retraction: f64,
    pub restitution: f64,
}

impl Default for PendulumSpec {
    fn default() -> Self {
        PendulumSpec {
            mass: 5.0,
            cord_length: 1.0,
            retraction: 0.9,
            restitution: 0.0,
        }
    }
}

impl PendulumSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::InvalidSpec(format!("mass {} must be positive", self.mass)));
        }
        if !(self.cord_length > 0.0 && self.cord_length.is_finite()) {
            return Err(Error::InvalidSpec(format!("cord length {} must be positive", self.cord_length)));
        }
        if !(0.0..=self.cord_length).contains(&self.retraction) {
            return Err(Error::InvalidSpec(format!(
                "retraction {} outside [0, {}]",
                self.retraction, self.cord_length
            )));
        }
        if !(0.0..=1.0).contains(&self.restitution) {
            return Err(Error::InvalidSpec(format!("restitution {} outside [0, 1]", self.restitution)));
        }
        Ok(())
    }

    /// Bob speed at the bottom of the arc.
    pub fn impact_speed(&self, g: f64) -> f64 {
        let l = self.cord_length;
        let drop = l - (l * l - self.retraction * self.retraction).sqrt();
        (2.0 * g * drop).sqrt()
    }
}

/// CoM velocity change from a pendulum impact at the CoM.
pub fn pendulum_push(spec: &PendulumSpec, params: &PhysicalParams) -> Result<f64> {
    spec.validate()?;
    let v = spec.impact_speed(params.g);
    Ok((1.0 + spec.restitution) * spec.mass * v / (spec.mass + params.robot_mass))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BallModel {
    pub rolling_friction: f64,
    /// Ratio of ball launch speed to foot speed at contact.
    pub restitution: f64,
    pub radius: f64,
    /// Clearance between the resting toe and the ball before a kick, m.
    pub placement_gap: f64,
}

impl Default for BallModel {
    fn default() -> Self {
        BallModel {
            rolling_friction: 0.05,
            restitution: 0.9,
            radius: 0.11,
            placement_gap: 0.02,
        }
    }
}

impl BallModel {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("rolling_friction", self.rolling_friction > 0.0 && self.rolling_friction.is_finite()),
            ("restitution", self.restitution > 0.0 && self.restitution <= 1.0),
            ("radius", self.radius > 0.0 && self.radius.is_finite()),
            ("placement_gap", self.placement_gap >= 0.0 && self.placement_gap.is_finite()),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(Error::config(format!("/ball/{name}"), "out of range"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Ball {
    pub pos: [f64; 2],
    pub vel: [f64; 2],
}

impl Ball {
    pub fn speed(&self) -> f64 {
        self.vel[0].hypot(self.vel[1])
    }
}

pub fn stopping_distance(speed: f64, model: &BallModel, g: f64) -> f64 {
    speed * speed / (2.0 * model.rolling_friction * g)
}

/// Rolling with constant deceleration `mu_r g` until rest. Position uses the exact
/// distance of the linear speed decay, so the total path equals [`stopping_distance`].
pub fn ball_roll_step(ball: &Ball, model: &BallModel, g: f64, dt: f64) -> Ball {
    let s = ball.speed();
    if s == 0.0 {
        return *ball;
    }
    let decel = model.rolling_friction * g;
    let s_new = (s - decel * dt).max(0.0);
    let travelled = if s_new > 0.0 { 0.5 * (s + s_new) * dt } else { s * s / (2.0 * decel) };
    let dir = [ball.vel[0] / s, ball.vel[1] / s];
    Ball {
        pos: [ball.pos[0] + dir[0] * travelled, ball.pos[1] + dir[1] * travelled],
        vel: [dir[0] * s_new, dir[1] * s_new],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params() -> PhysicalParams {
        PhysicalParams::default()
    }

    #[test]
    fn lipm_equilibrium() {
        for dt in [0.001, 0.1, 1.0] {
            assert_eq!(lipm_step(0.3, 0.0, 0.3, &params(), dt), (0.3, 0.0));
        }
    }

    #[test]
    fn lipm_closed_form_value() {
        let p = params();
        assert!((p.omega() - 3.301515).abs() < 1e-6);
        let (c, _) = lipm_step(0.01, 0.0, 0.0, &p, 0.1);
        assert!((c - 0.01 * (0.1 * p.omega()).cosh()).abs() < 1e-15);
        assert!((c - 0.010549968).abs() < 1e-9);
        // quoted elsewhere as 0.0105497, which drops a digit
        assert!((c - 0.0105497).abs() < 3e-7);
    }

    #[test]
    fn lipm_matches_analytic_over_many_steps() {
        let p = params();
        let w = p.omega();
        let (c0, v0, zmp, dt) = (0.02, -0.05, 0.01, 0.002);
        let (mut c, mut v) = (c0, v0);
        let mut worst: f64 = 0.0;
        for k in 1..=10_000 {
            (c, v) = lipm_step(c, v, zmp, &p, dt);
            let t = k as f64 * dt;
            let exact = zmp + (c0 - zmp) * (w * t).cosh() + v0 / w * (w * t).sinh();
            worst = worst.max(((c - exact) / exact.abs().max(1.0)).abs());
        }
        assert!(worst < 1e-12, "worst {worst}");
    }

    #[test]
    fn orbital_energy_conserved() {
        let p = params();
        let (mut c, mut v) = (0.05, -0.1);
        let e0 = orbital_energy(c, v, 0.0, &p);
        for _ in 0..500 {
            (c, v) = lipm_step(c, v, 0.0, &p, 0.002);
            assert!((orbital_energy(c, v, 0.0, &p) - e0).abs() < 1e-12);
        }
    }

    #[test]
    fn pendulum_reference_values() {
        let p = params();
        let spec = PendulumSpec::default();
        assert!((spec.impact_speed(p.g) - 3.32684).abs() < 1e-5);
        assert!((pendulum_push(&spec, &p).unwrap() - 0.69309).abs() < 1e-5);
        let still = PendulumSpec { retraction: 0.0, ..spec };
        assert_eq!(pendulum_push(&still, &p).unwrap(), 0.0);
    }

    #[test]
    fn pendulum_retraction_beyond_cord_is_invalid() {
        let spec = PendulumSpec { retraction: 1.2, ..PendulumSpec::default() };
        assert!(matches!(pendulum_push(&spec, &params()), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn restitution_doubles_plastic_impulse() {
        let p = params();
        let plastic = pendulum_push(&PendulumSpec::default(), &p).unwrap();
        let elastic = pendulum_push(&PendulumSpec { restitution: 1.0, ..PendulumSpec::default() }, &p).unwrap();
        assert!((elastic - 2.0 * plastic).abs() < 1e-15);
    }

    fn roll_out(v: f64, model: &BallModel, dt: f64) -> (Ball, usize) {
        let mut b = Ball { pos: [0.0, 0.0], vel: [v, 0.0] };
        let mut steps = 0;
        while b.speed() > 0.0 {
            b = ball_roll_step(&b, model, 9.81, dt);
            steps += 1;
        }
        (b, steps)
    }

    #[test]
    fn ball_stopping_distance() {
        let model = BallModel::default();
        let (b, _) = roll_out(2.215, &model, 0.002);
        let closed = 2.215f64.powi(2) / (2.0 * 0.05 * 9.81);
        assert!((b.pos[0] - closed).abs() < 1e-9);
        assert!((b.pos[0] - 5.0).abs() < 2e-3);
    }

    #[test]
    fn ball_stopping_time() {
        let model = BallModel::default();
        let dt = 0.001;
        let (_, steps) = roll_out(1.5, &model, dt);
        let t_stop = 1.5 / (0.05 * 9.81);
        assert!((steps as f64 * dt - t_stop).abs() <= dt);
    }

    #[test]
    fn ball_at_rest_stays() {
        let b = Ball { pos: [1.0, 2.0], vel: [0.0, 0.0] };
        assert_eq!(ball_roll_step(&b, &BallModel::default(), 9.81, 0.01), b);
    }

    proptest! {
        #[test]
        fn push_increases_with_retraction(d1 in 0.0f64..1.0, d2 in 0.0f64..1.0) {
            prop_assume!((d1 - d2).abs() > 1e-9);
            let (lo, hi) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
            let p = PhysicalParams::default();
            let a = pendulum_push(&PendulumSpec { retraction: lo, ..PendulumSpec::default() }, &p).unwrap();
            let b = pendulum_push(&PendulumSpec { retraction: hi, ..PendulumSpec::default() }, &p).unwrap();
            prop_assert!(b > a);
        }

        #[test]
        fn lipm_energy_invariant(c in -0.2f64..0.2, v in -1.0f64..1.0, p in -0.2f64..0.2, dt in 0.0005f64..0.01) {
            let params = PhysicalParams::default();
            let e0 = orbital_energy(c, v, p, &params);
            let (c1, v1) = lipm_step(c, v, p, &params, dt);
            prop_assert!((orbital_energy(c1, v1, p, &params) - e0).abs() < 1e-12);
        }
    }
}
