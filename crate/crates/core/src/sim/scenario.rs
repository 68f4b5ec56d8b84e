use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{ball_roll_step, pendulum_push, Ball, BallModel, PendulumSpec, TrajectoryLog, Walker, WalkerStatus};
use crate::config::parse_json;
use crate::error::{Error, Result};
use crate::estimation::{ComplementaryGains, Foot, KfNoise, PhysicalParams};
use crate::gait::GaitParams;
use crate::kick::{simulate_kick, KickProfile};
use crate::skills::{fit_track, kick_trigger, time_of_arrival, Agent, BallTrack, ControllerMsg, GamePhase, TrackSample};
use crate::stabilization::FeedbackGains;

pub const SIM_DT: f64 = 0.002;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Walk,
    Push,
    Kick,
    Intercept,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Walk => "walk",
            ScenarioKind::Push => "push",
            ScenarioKind::Kick => "kick",
            ScenarioKind::Intercept => "intercept",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControllerConfig {
    pub swing_feedback: bool,
    pub com_zmp_feedback: bool,
    pub gains: FeedbackGains,
    pub estimator: KfNoise,
    pub imu: ComplementaryGains,
    /// Standard deviation of the CoM position measurement, m.
    pub com_noise: f64,
    /// Standard deviation of the gyro, rad/s.
    pub gyro_noise: f64,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        ControllerConfig {
            swing_feedback: true,
            com_zmp_feedback: true,
            gains: FeedbackGains::default(),
            estimator: KfNoise::default(),
            imu: ComplementaryGains::default(),
            com_noise: 0.0005,
            gyro_noise: 0.002,
        }
    }
}

impl ControllerConfig {
    pub fn open_loop(self) -> Self {
        ControllerConfig {
            swing_feedback: false,
            com_zmp_feedback: false,
            ..self
        }
    }

    fn validate(&self) -> Result<()> {
        self.gains.validate()?;
        let checks = [
            ("estimator/q_proc", self.estimator.q_proc > 0.0),
            ("estimator/r_meas", self.estimator.r_meas > 0.0),
            ("estimator/accel_tau", self.estimator.accel_tau >= 0.0),
            ("imu/k_acc", self.imu.k_acc >= 0.0),
            ("imu/g", self.imu.g > 0.0),
            ("com_noise", self.com_noise >= 0.0 && self.com_noise.is_finite()),
            ("gyro_noise", self.gyro_noise >= 0.0 && self.gyro_noise.is_finite()),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(Error::config(format!("/controller/{name}"), "out of range"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PendulumConfig {
    pub mass: f64,
    pub cord_length: f64,
    pub retraction: f64,
    pub restitution: f64,
    /// Time of the first impact, s.
    pub time_s: f64,
    /// Push direction in the ground plane, rad (0 pushes forward).
    pub direction: f64,
    pub count: u32,
    pub interval_s: f64,
}

impl Default for PendulumConfig {
    fn default() -> Self {
        let spec = PendulumSpec::default();
        PendulumConfig {
            mass: spec.mass,
            cord_length: spec.cord_length,
            retraction: spec.retraction,
            restitution: spec.restitution,
            time_s: 2.0,
            direction: 0.0,
            count: 1,
            interval_s: 1.0,
        }
    }
}

impl PendulumConfig {
    pub fn spec(&self) -> PendulumSpec {
        PendulumSpec {
            mass: self.mass,
            cord_length: self.cord_length,
            retraction: self.retraction,
            restitution: self.restitution,
        }
    }

    fn validate(&self) -> Result<()> {
        let checks = [
            ("mass", self.mass > 0.0 && self.mass.is_finite()),
            ("cord_length", self.cord_length > 0.0 && self.cord_length.is_finite()),
            ("retraction", (0.0..=self.cord_length).contains(&self.retraction)),
            ("restitution", (0.0..=1.0).contains(&self.restitution)),
            ("time_s", self.time_s >= 0.0 && self.time_s.is_finite()),
            ("direction", self.direction.is_finite()),
            ("interval_s", self.interval_s > 0.0 && self.interval_s.is_finite()),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(Error::config(format!("/pendulum/{name}"), "out of range"));
            }
        }
        Ok(())
    }
}

/// Ball model plus the kick and interception setup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BallConfig {
    pub rolling_friction: f64,
    pub restitution: f64,
    pub radius: f64,
    pub placement_gap: f64,
    pub kick_strength: f64,
    /// Earliest time the kick scenario starts its kick, s.
    pub kick_time: f64,
    /// Initial distance of a rolling ball from the kicking foot, m.
    pub start_distance: f64,
    /// Initial speed of the ball toward the robot, m/s.
    pub start_speed: f64,
    pub detection_rate: f64,
    /// Standard deviation of detected ball positions, m.
    pub detection_noise: f64,
    pub trigger_margin: f64,
    /// Kicked distance that counts as a goal, m.
    pub goal_distance: f64,
}

impl Default for BallConfig {
    fn default() -> Self {
        let m = BallModel::default();
        BallConfig {
            rolling_friction: m.rolling_friction,
            restitution: m.restitution,
            radius: m.radius,
            placement_gap: m.placement_gap,
            kick_strength: 1.0,
            kick_time: 1.0,
            start_distance: 3.0,
            start_speed: 2.7,
            detection_rate: 33.3,
            detection_noise: 0.01,
            trigger_margin: 0.05,
            goal_distance: 4.5,
        }
    }
}

impl BallConfig {
    pub fn model(&self) -> BallModel {
        BallModel {
            rolling_friction: self.rolling_friction,
            restitution: self.restitution,
            radius: self.radius,
            placement_gap: self.placement_gap,
        }
    }

    fn validate(&self) -> Result<()> {
        self.model().validate()?;
        let checks = [
            ("kick_strength", (0.0..=1.0).contains(&self.kick_strength)),
            ("kick_time", self.kick_time >= 0.0 && self.kick_time.is_finite()),
            ("start_distance", self.start_distance > 0.0 && self.start_distance.is_finite()),
            ("start_speed", self.start_speed >= 0.0 && self.start_speed.is_finite()),
            ("detection_rate", self.detection_rate > 0.0 && self.detection_rate.is_finite()),
            ("detection_noise", self.detection_noise >= 0.0 && self.detection_noise.is_finite()),
            ("trigger_margin", self.trigger_margin >= 0.0 && self.trigger_margin.is_finite()),
            ("goal_distance", self.goal_distance > 0.0),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(Error::config(format!("/ball/{name}"), "out of range"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub robot: PhysicalParams,
    #[serde(default)]
    pub gait: GaitParams,
    #[serde(default)]
    pub controller: ControllerConfig,
    #[serde(default)]
    pub pendulum: PendulumConfig,
    #[serde(default)]
    pub ball: BallConfig,
    #[serde(default = "default_duration")]
    pub duration_s: f64,
}

fn default_duration() -> f64 {
    10.0
}

impl ScenarioConfig {
    pub fn new(scenario: ScenarioKind) -> Self {
        ScenarioConfig {
            scenario,
            seed: 0,
            robot: PhysicalParams::default(),
            gait: GaitParams::default(),
            controller: ControllerConfig::default(),
            pendulum: PendulumConfig::default(),
            ball: BallConfig::default(),
            duration_s: default_duration(),
        }
    }

    /// Parses and validates a config document.
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = parse_json(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.robot.validate()?;
        self.gait.validate()?;
        self.controller.validate()?;
        self.pendulum.validate()?;
        self.ball.validate()?;
        if !(self.duration_s > 0.0 && self.duration_s.is_finite()) {
            return Err(Error::config("/duration_s", "must be positive"));
        }
        Ok(())
    }
}

struct Run {
    walker: Walker,
    log: TrajectoryLog,
    fell: bool,
    aborted: bool,
    reason: Option<String>,
}

impl Run {
    fn new(cfg: &ScenarioConfig) -> Result<Self> {
        Ok(Run {
            walker: Walker::new(cfg.robot, cfg.gait, cfg.controller, cfg.seed)?,
            log: TrajectoryLog::default(),
            fell: false,
            aborted: false,
            reason: None,
        })
    }

    /// Steps the walker and records the row. Returns false once the run has ended.
    fn step(&mut self, event: &mut String) -> bool {
        let status = self.walker.step(SIM_DT);
        self.log.summary.max_com_error = self.log.summary.max_com_error.max(self.walker.com_error());
        match status {
            WalkerStatus::Walking => {}
            WalkerStatus::Fell(why) => {
                self.fell = true;
                self.reason = Some(why);
                push_event(event, "fell");
            }
            WalkerStatus::Aborted(why) => {
                self.fell = true;
                self.aborted = true;
                self.reason = Some(why);
                push_event(event, "fell");
            }
        }
        self.log.rows.push(self.walker.row(event));
        event.clear();
        !self.fell
    }

    fn finish(mut self, cfg: &ScenarioConfig) -> TrajectoryLog {
        let s = &mut self.log.summary;
        s.v = 1;
        s.scenario = cfg.scenario.name().to_string();
        s.fell = self.fell;
        s.aborted = self.aborted;
        s.recovered = !self.fell;
        s.duration = self.walker.t;
        s.reason = self.reason;
        self.log
    }
}

fn push_event(event: &mut String, tag: &str) {
    if !event.is_empty() {
        event.push(';');
    }
    event.push_str(tag);
}

fn steps_for(duration: f64) -> usize {
    (duration / SIM_DT).round() as usize
}

/// Runs one scenario. Interception starts in regular play.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<TrajectoryLog> {
    let play = [(0.0, ControllerMsg::Set { phase: GamePhase::Play, secondary: None })];
    run_scenario_with_messages(cfg, &play)
}

/// Like [`run_scenario`], with game-controller messages applied at the given times.
pub fn run_scenario_with_messages(cfg: &ScenarioConfig, messages: &[(f64, ControllerMsg)]) -> Result<TrajectoryLog> {
    cfg.validate()?;
    match cfg.scenario {
        ScenarioKind::Walk => run_walk(cfg),
        ScenarioKind::Push => run_push(cfg),
        ScenarioKind::Kick => run_kick(cfg),
        ScenarioKind::Intercept => run_intercept(cfg, messages),
    }
}

fn run_walk(cfg: &ScenarioConfig) -> Result<TrajectoryLog> {
    let mut run = Run::new(cfg)?;
    let mut event = String::new();
    for _ in 0..steps_for(cfg.duration_s) {
        if !run.step(&mut event) {
            break;
        }
    }
    Ok(run.finish(cfg))
}

/// Walks in place and applies the configured pendulum impacts.
pub fn run_push(cfg: &ScenarioConfig) -> Result<TrajectoryLog> {
    let dv = pendulum_push(&cfg.pendulum.spec(), &cfg.robot)?;
    let dir = [cfg.pendulum.direction.cos(), cfg.pendulum.direction.sin()];
    let mut run = Run::new(cfg)?;
    let mut pushes_done = 0;
    let mut event = String::new();
    for _ in 0..steps_for(cfg.duration_s) {
        let next = cfg.pendulum.time_s + pushes_done as f64 * cfg.pendulum.interval_s;
        if pushes_done < cfg.pendulum.count && run.walker.t + 1e-9 >= next {
            run.walker.apply_impulse([dv * dir[0], dv * dir[1]]);
            pushes_done += 1;
            push_event(&mut event, "push");
        }
        if !run.step(&mut event) {
            break;
        }
    }
    let mut log = run.finish(cfg);
    log.summary.delta_v = Some(dv);
    Ok(log)
}

/// Ball contact bookkeeping shared by the kick and intercept scenarios.
struct BallState {
    ball: Ball,
    model: BallModel,
    contact_x: Option<f64>,
    contact_speed: f64,
    last_toe: Option<f64>,
}

impl BallState {
    fn new(ball: Ball, model: BallModel) -> Self {
        BallState {
            ball,
            model,
            contact_x: None,
            contact_speed: 0.0,
            last_toe: None,
        }
    }

    /// Advances the ball and resolves contact with the kicking foot.
    fn step(&mut self, walker: &Walker, leg: Foot, g: f64, event: &mut String) {
        let (toe, height) = walker.toe(leg);
        let speed = self.last_toe.map_or(0.0, |p| (toe - p) / SIM_DT);
        self.last_toe = Some(toe);
        let r = self.model.radius;
        let touching = toe >= self.ball.pos[0] - r && height <= 2.0 * r;
        if self.contact_x.is_none() && touching {
            if walker.kick_in_progress() && speed > 0.0 {
                let relative = speed - self.ball.vel[0];
                self.ball.vel = [self.model.restitution * relative, 0.0];
                self.contact_x = Some(self.ball.pos[0]);
                self.contact_speed = speed;
                push_event(event, "contact");
            } else if self.ball.vel[0] < 0.0 {
                self.ball.vel = [0.0, 0.0];
                self.ball.pos[0] = toe + r;
                push_event(event, "ball_blocked");
            }
        }
        self.ball = ball_roll_step(&self.ball, &self.model, g, SIM_DT);
    }

    fn kicked_distance(&self) -> f64 {
        self.contact_x.map_or(0.0, |x0| (self.ball.pos[0] - x0).max(0.0))
    }
}

fn run_kick(cfg: &ScenarioConfig) -> Result<TrajectoryLog> {
    let profile = KickProfile::default().with_strength(cfg.ball.kick_strength);
    let mut run = Run::new(cfg)?;
    let model = cfg.ball.model();
    let mut ball: Option<BallState> = None;
    let mut scheduled = false;
    let mut event = String::new();
    for _ in 0..steps_for(cfg.duration_s) {
        if !scheduled && run.walker.t >= cfg.ball.kick_time {
            run.walker.schedule_kick(profile.clone(), Foot::Left);
            scheduled = true;
        }
        if ball.is_none() && run.walker.kick_in_progress() {
            let (toe, _) = run.walker.toe(Foot::Left);
            let start = Ball {
                pos: [toe + model.radius + model.placement_gap, 0.0],
                vel: [0.0, 0.0],
            };
            ball = Some(BallState::new(start, model));
            push_event(&mut event, "kick");
        }
        if let Some(b) = ball.as_mut() {
            b.step(&run.walker, Foot::Left, cfg.robot.g, &mut event);
        }
        if !run.step(&mut event) {
            break;
        }
    }
    let mut log = run.finish(cfg);
    if let Some(b) = ball {
        // the ball keeps rolling after the run ends
        let mut rest = b;
        while rest.ball.speed() > 0.0 {
            rest.ball = ball_roll_step(&rest.ball, &rest.model, cfg.robot.g, SIM_DT);
        }
        log.summary.distance = rest.kicked_distance();
        log.summary.contact_speed = Some(rest.contact_speed);
    } else {
        log.summary.contact_speed = Some(0.0);
    }
    log.summary.goals = u32::from(log.summary.distance >= cfg.ball.goal_distance);
    Ok(log)
}

fn run_intercept(cfg: &ScenarioConfig, messages: &[(f64, ControllerMsg)]) -> Result<TrajectoryLog> {
    let profile = KickProfile::default().with_strength(cfg.ball.kick_strength);
    let model = cfg.ball.model();
    let plan = simulate_kick(&profile, &cfg.gait, &cfg.robot, &model);
    let t_exec = plan
        .contact_time
        .ok_or_else(|| Error::InvalidInput("the configured kick never reaches the ball".into()))?;
    let r_trigger = cfg.robot.foot_half_length + model.radius;

    let mut run = Run::new(cfg)?;
    let mut agent = Agent::default();
    let mut pending: Vec<&(f64, ControllerMsg)> = messages.iter().collect();
    pending.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut pending = pending.into_iter().peekable();

    let foot_x = run.walker.c[0];
    let start = Ball {
        pos: [foot_x + cfg.ball.start_distance, 0.0],
        vel: [-cfg.ball.start_speed, 0.0],
    };
    let mut ball = BallState::new(start, model);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let noise = Normal::new(0.0, cfg.ball.detection_noise).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let mut track = BallTrack::default();
    let period = 1.0 / cfg.ball.detection_rate;
    let mut next_detection = 0.0;
    let mut triggers = 0u32;
    let mut kick_leg = Foot::Left;
    let mut event = String::new();

    for _ in 0..steps_for(cfg.duration_s) {
        let t = run.walker.t;
        while let Some((_, msg)) = pending.next_if(|m| m.0 <= t + 1e-12) {
            let before = agent.warnings.len();
            agent.on_message(msg);
            if agent.warnings.len() > before {
                push_event(&mut event, "controller_warning");
            }
        }
        if t + 1e-12 >= next_detection {
            next_detection += period;
            let pos = [ball.ball.pos[0] + noise.sample(&mut rng), ball.ball.pos[1] + noise.sample(&mut rng)];
            track.push(TrackSample { t, pos })?;
        }
        if triggers == 0 && agent.game.allows_play() && track.len() >= 5 {
            if let Ok(fit) = fit_track(&track) {
                let dt_since = t - fit.t_ref;
                let d_now = fit.position(t)[0] - run.walker.c[0];
                let v_now = fit.v[0] + fit.a[0] * dt_since;
                if let Ok(t_arrival) = time_of_arrival(d_now, v_now, fit.a[0], r_trigger) {
                    if kick_trigger(t_arrival, t_exec, cfg.ball.trigger_margin) {
                        kick_leg = run.walker.kick_now(profile.clone());
                        ball.last_toe = None;
                        triggers += 1;
                        push_event(&mut event, "kick_trigger");
                    }
                }
            }
        }
        ball.step(&run.walker, kick_leg, cfg.robot.g, &mut event);
        if !run.step(&mut event) {
            break;
        }
    }
    let mut log = run.finish(cfg);
    let mut rest = ball;
    while rest.ball.speed() > 0.0 {
        rest.ball = ball_roll_step(&rest.ball, &rest.model, cfg.robot.g, SIM_DT);
    }
    log.summary.distance = rest.kicked_distance();
    log.summary.contact_speed = Some(rest.contact_speed);
    log.summary.kick_triggers = Some(triggers);
    log.summary.goals = u32::from(log.summary.distance >= cfg.ball.goal_distance);
    Ok(log)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderEntry {
    pub mass: f64,
    pub retraction: f64,
    pub delta_v: f64,
    pub recovered_feedback: bool,
    pub recovered_open_loop: bool,
}

/// Push scenario on every (mass, retraction) pair, with and without balance feedback.
pub fn push_ladder(base: &ScenarioConfig, masses: &[f64], retractions: &[f64]) -> Result<Vec<LadderEntry>> {
    let mut jobs = Vec::new();
    for &m in masses {
        for &d in retractions {
            let mut cfg = base.clone();
            cfg.scenario = ScenarioKind::Push;
            cfg.pendulum.mass = m;
            cfg.pendulum.retraction = d;
            jobs.push(cfg);
        }
    }
    let results: Vec<Result<LadderEntry>> = std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|cfg| {
                s.spawn(move || -> Result<LadderEntry> {
                    let closed = run_push(cfg)?;
                    let mut open_cfg = cfg.clone();
                    open_cfg.controller = cfg.controller.open_loop();
                    let open = run_push(&open_cfg)?;
                    Ok(LadderEntry {
                        mass: cfg.pendulum.mass,
                        retraction: cfg.pendulum.retraction,
                        delta_v: closed.summary.delta_v.unwrap_or(0.0),
                        recovered_feedback: closed.summary.recovered,
                        recovered_open_loop: open.summary.recovered,
                    })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("ladder worker panicked")).collect()
    });
    results.into_iter().collect()
}
