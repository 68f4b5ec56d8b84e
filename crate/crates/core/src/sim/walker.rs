use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{lipm_step, ControllerConfig, TrajectoryRow};
use crate::error::Result;
use crate::estimation::{support_update, ComEstimator, ComplementaryFilter, Foot, ImuSample, PhysicalParams, SupportState};
use crate::fused_angles::{rotation_from_fused, FusedAngles, Hemisphere, Rotation};
use crate::gait::{abstract_to_cartesian, abstract_waveforms, advance_phase, AbstractPose, GaitCommand, GaitParams, GaitPhase};
use crate::kick::{apply_kick_offsets, eval_waveform, kick_phase, KickProfile};
use crate::stabilization::{
    com_zmp_control, leaky_integrate, match_zmp_offset, reference_cpg, swing_leg_feedback, RateLimiter, ReferenceState,
};

/// Constants of the simulated robot's low-level behaviour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantParams {
    /// Gain with which the CoP is moved to track the commanded CoM velocity, 1/s.
    pub tracking_gain: f64,
    /// Passive return of the CoM toward the reference without feedback, 1/s.
    pub passive_gain: f64,
    /// CoM to support foot distance at which the robot is considered down, m.
    pub fall_distance: f64,
    /// Divergence bound on |c| that aborts the run, m.
    pub blow_up: f64,
}

impl Default for PlantParams {
    fn default() -> Self {
        PlantParams {
            tracking_gain: 8.0,
            passive_gain: 2.0,
            fall_distance: 0.4,
            blow_up: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WalkerStatus {
    Walking,
    Fell(String),
    Aborted(String),
}

#[derive(Debug, Clone)]
struct ActiveKick {
    profile: KickProfile,
    leg: Foot,
    started: bool,
    retract: f64,
    swing: f64,
}

/// LIPM-driven robot with the full estimation and balance stack in the loop.
#[derive(Debug, Clone)]
pub struct Walker {
    physical: PhysicalParams,
    gait: GaitParams,
    ctrl: ControllerConfig,
    plant: PlantParams,
    rng: ChaCha8Rng,
    com_noise: Normal<f64>,
    gyro_noise: Normal<f64>,

    pub t: f64,
    pub c: [f64; 2],
    pub c_dot: [f64; 2],
    /// Center of pressure applied during the last step.
    pub cop: [f64; 2],
    /// Support foot center.
    pub foot: [f64; 2],
    pub phase: GaitPhase,
    pub command: GaitCommand,

    estimator: ComEstimator,
    imu: ComplementaryFilter,
    true_orientation: Rotation,
    support_est: SupportState,
    zmp_offset: [f64; 2],
    hip_shift: [f64; 2],
    limiters: [RateLimiter; 2],
    saturated_for: f64,
    swing_offset: (f64, f64),
    kick: Option<ActiveKick>,

    reference_world: ReferenceState,
    p_hat: [f64; 2],
    tilt_est: (f64, f64),
}

impl Walker {
    pub fn new(physical: PhysicalParams, gait: GaitParams, ctrl: ControllerConfig, seed: u64) -> Result<Self> {
        let phase = GaitPhase::new(-std::f64::consts::PI, gait.frequency);
        let r = reference_cpg(&phase, &gait.command, &gait, &physical);
        let origin = [0.0, 0.0];
        let foot = [r.p_ref[0], r.p_ref[1]];
        let c = [origin[0] + r.c_ref[0], origin[1] + r.c_ref[1]];
        let c_dot = r.c_dot_ref;
        let com_noise = Normal::new(0.0, ctrl.com_noise).map_err(|e| crate::Error::InvalidInput(e.to_string()))?;
        let gyro_noise = Normal::new(0.0, ctrl.gyro_noise).map_err(|e| crate::Error::InvalidInput(e.to_string()))?;
        let limiters = [0, 1].map(|i| RateLimiter::new(c_dot[i], ctrl.gains.rate_max, ctrl.gains.rate_residual_tau));
        Ok(Walker {
            physical,
            gait,
            ctrl,
            plant: PlantParams::default(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            com_noise,
            gyro_noise,
            t: 0.0,
            c,
            c_dot,
            cop: foot,
            foot,
            phase,
            command: gait.command,
            estimator: ComEstimator::new(ctrl.estimator, c),
            imu: ComplementaryFilter::new(ctrl.imu),
            true_orientation: Rotation::identity(),
            support_est: SupportState::new(phase.support_leg()),
            zmp_offset: [0.0, 0.0],
            hip_shift: [0.0, 0.0],
            limiters,
            saturated_for: 0.0,
            swing_offset: (0.0, 0.0),
            kick: None,
            reference_world: ReferenceState::default(),
            p_hat: foot,
            tilt_est: (0.0, 0.0),
        })
    }

    pub fn plant(&self) -> &PlantParams {
        &self.plant
    }

    pub fn reference(&self) -> &ReferenceState {
        &self.reference_world
    }

    /// Estimated fused pitch and roll.
    pub fn tilt_estimate(&self) -> (f64, f64) {
        self.tilt_est
    }

    /// Distance from the CoM to its reference, m.
    pub fn com_error(&self) -> f64 {
        let r = &self.reference_world;
        (self.c[0] - r.c_ref[0]).hypot(self.c[1] - r.c_ref[1])
    }

    pub fn apply_impulse(&mut self, dv: [f64; 2]) {
        self.c_dot[0] += dv[0];
        self.c_dot[1] += dv[1];
    }

    /// Queues a kick on the next swing of `leg`.
    pub fn schedule_kick(&mut self, profile: KickProfile, leg: Foot) {
        self.kick = Some(ActiveKick {
            profile,
            leg,
            started: false,
            retract: 0.0,
            swing: 0.0,
        });
    }

    /// Starts the swing of `leg` immediately, exchanging support if necessary.
    pub fn resync_to_swing(&mut self, leg: Foot) {
        let mu = match leg {
            Foot::Left => -std::f64::consts::PI,
            Foot::Right => 0.0,
        };
        let old_support = self.phase.support_leg();
        self.phase = GaitPhase::new(mu, self.phase.frequency);
        if self.phase.support_leg() != old_support {
            self.exchange_support();
        }
    }

    /// Kicks with the leg whose swing start is nearest in phase, restarting that swing now.
    /// Jumps are at most a quarter cycle, which keeps the lateral sway consistent.
    pub fn kick_now(&mut self, profile: KickProfile) -> Foot {
        let to_right = crate::fused_angles::wrap_angle(self.phase.mu).abs();
        let leg = if to_right <= std::f64::consts::FRAC_PI_2 { Foot::Right } else { Foot::Left };
        self.schedule_kick(profile, leg);
        self.resync_to_swing(leg);
        leg
    }

    pub fn kick_in_progress(&self) -> bool {
        self.kick.as_ref().is_some_and(|k| k.started)
    }

    /// Abstract pose of `leg` including any kick offsets.
    pub fn leg_pose(&self, leg: Foot) -> AbstractPose {
        let (l, r) = abstract_waveforms(&self.phase, &self.command, &self.gait);
        let base = if leg == Foot::Left { l } else { r };
        match &self.kick {
            Some(k) if k.leg == leg && k.started => apply_kick_offsets(&base, k.retract, k.swing),
            _ => base,
        }
    }

    /// World forward position of the toe of `leg` and the sole height, when trunk-relative
    /// geometry is anchored above the CoM.
    pub fn toe(&self, leg: Foot) -> (f64, f64) {
        let foot = abstract_to_cartesian(&self.leg_pose(leg), leg, &self.gait.geometry());
        (
            self.c[0] + foot.x + self.physical.foot_half_length,
            foot.z + self.gait.stance_leg_length(),
        )
    }

    fn exchange_support(&mut self) {
        let r = reference_cpg(&self.phase, &self.command, &self.gait, &self.physical);
        let leg = self.gait.stance_leg_length();
        let (ds, dl) = self.swing_offset;
        self.foot = [
            self.c[0] + r.p_ref[0] - r.c_ref[0] + leg * ds.sin() + self.hip_shift[0],
            self.c[1] + r.p_ref[1] - r.c_ref[1] - leg * dl.sin() + self.hip_shift[1],
        ];
        self.swing_offset = (0.0, 0.0);
    }

    fn update_kick(&mut self, dt: f64) {
        let Some(k) = self.kick.as_mut() else { return };
        let lp = self.phase.leg_phase(k.leg);
        match kick_phase(lp) {
            Some(phi) if k.started || phi < 0.05 => {
                k.started = true;
                let beta = if k.profile.low_pass_tau > 0.0 { (-dt / k.profile.low_pass_tau).exp() } else { 0.0 };
                let s = k.profile.strength;
                k.retract = beta * k.retract + (1.0 - beta) * s * eval_waveform(&k.profile.retract, phi);
                k.swing = beta * k.swing + (1.0 - beta) * s * eval_waveform(&k.profile.swing, phi);
            }
            None if k.started => self.kick = None,
            _ => {}
        }
    }

    /// One control and integration step.
    pub fn step(&mut self, dt: f64) -> WalkerStatus {
        let phys = self.physical;
        let gains = self.ctrl.gains;
        let w = phys.omega();
        let w2 = w * w;

        // reference in world coordinates
        let r = reference_cpg(&self.phase, &self.command, &self.gait, &phys);
        let origin = [self.foot[0] - r.p_ref[0], self.foot[1] - r.p_ref[1]];
        let mut reference = ReferenceState {
            c_ref: [origin[0] + r.c_ref[0], origin[1] + r.c_ref[1]],
            c_dot_ref: r.c_dot_ref,
            c_ddot_ref: r.c_ddot_ref,
            p_ref: self.foot,
            zmp_offset: self.zmp_offset,
        };

        // estimation
        let meas = [
            self.c[0] + self.com_noise.sample(&mut self.rng),
            self.c[1] + self.com_noise.sample(&mut self.rng),
        ];
        let accel = [w2 * (self.c[0] - self.cop[0]), w2 * (self.c[1] - self.cop[1])];
        self.estimator.update(meas, accel, dt);
        let est = self.estimator.state;
        self.p_hat = est.zmp(&phys);

        // balance control
        let v_cmd = if self.ctrl.com_zmp_feedback {
            reference = match_zmp_offset(&reference, self.p_hat, gains.leak_tau, dt, phys.foot_half_length);
            self.zmp_offset = reference.zmp_offset;
            let target = com_zmp_control(&est, self.p_hat, &reference, &gains);
            [self.limiters[0].update(target[0], dt), self.limiters[1].update(target[1], dt)]
        } else {
            let kp = self.plant.passive_gain;
            [
                reference.c_dot_ref[0] - kp * (self.c[0] - reference.c_ref[0]),
                reference.c_dot_ref[1] - kp * (self.c[1] - reference.c_ref[1]),
            ]
        };

        // plant: the CoP moves to track the velocity command, limited to the sole
        let bounds = [phys.foot_half_length, phys.foot_half_width];
        let mut saturated = false;
        for i in 0..2 {
            let demand = self.c[i] - (reference.c_ddot_ref[i] + self.plant.tracking_gain * (v_cmd[i] - self.c_dot[i])) / w2;
            let p = demand.clamp(self.foot[i] - bounds[i], self.foot[i] + bounds[i]);
            saturated |= (p - demand).abs() > 1e-12;
            self.cop[i] = p;
            (self.c[i], self.c_dot[i]) = lipm_step(self.c[i], self.c_dot[i], p, &phys, dt);
        }
        self.saturated_for = if saturated { self.saturated_for + dt } else { 0.0 };

        // tilt from the capture point error, sensed through the IMU
        let xi = [
            (self.c[0] - reference.c_ref[0]) + (self.c_dot[0] - reference.c_dot_ref[0]) / w,
            (self.c[1] - reference.c_ref[1]) + (self.c_dot[1] - reference.c_dot_ref[1]) / w,
        ];
        let pitch = (xi[0] / phys.com_height).atan();
        let roll = -(xi[1] / phys.com_height).atan();
        let orientation = rotation_from_fused(&FusedAngles::new(0.0, pitch, roll, Hemisphere::Upper)).unwrap_or(self.true_orientation);
        let delta = self.true_orientation.as_unit_quaternion().inverse() * orientation.as_unit_quaternion();
        let mut gyro = delta.scaled_axis() / dt;
        for k in 0..3 {
            gyro[k] += self.gyro_noise.sample(&mut self.rng);
        }
        let accel_body: Vector3<f64> = orientation.up_in_body() * phys.g;
        self.true_orientation = orientation;
        self.imu.update(&ImuSample { gyro, accel: accel_body, dt });
        let fused = self.imu.fused();
        self.tilt_est = (fused.pitch, fused.roll);

        // swing-leg feedback and hip shift
        if self.ctrl.swing_feedback {
            let o = swing_leg_feedback(self.tilt_est, &self.phase, &gains);
            let m = self.gait.swing_offset_max;
            let (ds, dl) = o.leg(self.phase.swing_leg());
            self.swing_offset = (ds.clamp(-m, m), dl.clamp(-m, m));
        }
        if self.ctrl.com_zmp_feedback {
            for i in 0..2 {
                let err = self.c[i] - reference.c_ref[i];
                self.hip_shift[i] =
                    leaky_integrate(self.hip_shift[i], err, gains.leak_tau, dt).clamp(-gains.hip_shift_max, gains.hip_shift_max);
            }
        }
        self.reference_world = reference;

        // gait phase and support exchange
        let old_support = self.phase.support_leg();
        self.phase = advance_phase(&self.phase, dt);
        self.t += dt;
        if self.phase.support_leg() != old_support {
            self.exchange_support();
        }
        self.update_kick(dt);
        let left = abstract_to_cartesian(&self.leg_pose(Foot::Left), Foot::Left, &self.gait.geometry());
        let right = abstract_to_cartesian(&self.leg_pose(Foot::Right), Foot::Right, &self.gait.geometry());
        self.support_est = support_update(self.support_est, left.z, right.z, phys.hysteresis_margin);

        // fall detection
        let finite = self.c.iter().chain(self.c_dot.iter()).all(|v| v.is_finite());
        if !finite || self.c[0].hypot(self.c[1]) > self.plant.blow_up {
            return WalkerStatus::Aborted(format!("CoM diverged at t = {:.3} s", self.t));
        }
        let rel = [self.c[0] - self.foot[0], self.c[1] - self.foot[1]];
        if rel[0].hypot(rel[1]) > self.plant.fall_distance {
            return WalkerStatus::Fell(format!("CoM left the support foot at t = {:.3} s", self.t));
        }
        let cp = [rel[0] + self.c_dot[0] / w, rel[1] + self.c_dot[1] / w];
        if self.saturated_for > self.phase.step_duration() && (cp[0].abs() > bounds[0] || cp[1].abs() > bounds[1]) {
            return WalkerStatus::Fell(format!("ZMP saturated for a full step at t = {:.3} s", self.t));
        }
        WalkerStatus::Walking
    }

    pub fn row(&self, event: &str) -> TrajectoryRow {
        let r = &self.reference_world;
        TrajectoryRow {
            t: self.t,
            c: self.c,
            c_dot: self.c_dot,
            zmp: self.p_hat,
            p_ref: [r.p_ref[0] + r.zmp_offset[0], r.p_ref[1] + r.zmp_offset[1]],
            support: self.support_est.support,
            phase: self.phase.mu,
            theta: self.tilt_est.0,
            phi: self.tilt_est.1,
            event: event.to_string(),
        }
    }
}
