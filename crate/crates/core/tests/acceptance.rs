//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use humanoid_motion::estimation::{pseudo_zmp, PhysicalParams};
use humanoid_motion::fused_angles::{fused_from_rotation, rotation_from_fused, Rotation};
use humanoid_motion::gait::GaitParams;
use humanoid_motion::kick::{eval_waveform, low_pass_trace, simulate_kick, KickProfile, KickWaveform, LEGACY_STRENGTH};
use humanoid_motion::perception::scene::{render_scene, RobotFigure};
use humanoid_motion::perception::{assemble_poses, extract_peaks, render_gaussian, AssemblyParams, KeypointKind};
use humanoid_motion::sim::{
    lipm_step, orbital_energy, push_ladder, run_scenario, BallModel, ScenarioConfig, ScenarioKind,
};
use humanoid_motion::skills::{fit_samples, time_of_arrival, TrackSample};
use humanoid_motion::stabilization::{com_zmp_control_axis, com_zmp_system_matrix, FeedbackGains};
use nalgebra::{UnitQuaternion, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn random_rotation(rng: &mut ChaCha8Rng) -> Rotation {
    // uniform on SO(3) via normalised Gaussian quaternion components
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-6 && n2 <= 1.0 {
            let n = n2.sqrt();
            return Rotation::new(v[0] / n, v[1] / n, v[2] / n, v[3] / n).expect("unit quaternion");
        }
    }
}

fn pseudo_zmp_equation() -> Outcome {
    let p = PhysicalParams { com_height: 0.9, g: 9.81, ..PhysicalParams::default() };
    let value = pseudo_zmp(0.10, 1.0, &p);
    let closed = 0.10 - 0.9 / 9.81;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let (c1, a1, c2, a2, k): (f64, f64, f64, f64, f64) =
            (rng.gen_range(-1.0..1.0), rng.gen_range(-20.0..20.0), rng.gen_range(-1.0..1.0), rng.gen_range(-20.0..20.0), rng.gen_range(-3.0..3.0));
        let lhs = pseudo_zmp(c1 + k * c2, a1 + k * a2, &p);
        let rhs = pseudo_zmp(c1, a1, &p) + k * pseudo_zmp(c2, a2, &p);
        worst = worst.max((lhs - rhs).abs());
    }
    let ok = (value - closed).abs() < 1e-9 && (value - 0.008257).abs() < 5e-7 && worst < 1e-12;
    outcome(ok, format!("value {value:.9} (closed form {closed:.9}), linearity residual {worst:.1e}"))
}

fn fused_angles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    let mut yaw_worst: f64 = 0.0;
    for i in 0..100_000 {
        let q = random_rotation(&mut rng);
        let f = fused_from_rotation(&q);
        let back = rotation_from_fused(&f).expect("valid fused angles");
        worst = worst.max(q.distance(&back));
        if i % 10 == 0 {
            let yaw = UnitQuaternion::from_axis_angle(&Vector3::z_axis(), rng.gen_range(-PI..PI));
            let turned = fused_from_rotation(&Rotation::from_unit(yaw * q.as_unit_quaternion()));
            yaw_worst = yaw_worst.max((turned.pitch - f.pitch).abs()).max((turned.roll - f.roll).abs());
        }
    }
    outcome(
        worst < 1e-9 && yaw_worst < 1e-9,
        format!("round-trip distance max {worst:.1e}, tilt change under yaw max {yaw_worst:.1e}"),
    )
}

fn lipm_integrator() -> Outcome {
    let p = PhysicalParams::default();
    let w = p.omega();
    let (c0, v0, zmp, dt) = (0.02, -0.05, 0.01, 0.002);
    let (mut c, mut v) = (c0, v0);
    let mut worst: f64 = 0.0;
    let mut energy_drift: f64 = 0.0;
    for k in 1..=10_000 {
        let (c1, v1) = lipm_step(c, v, zmp, &p, dt);
        // relative to the kinetic and potential terms, which grow with the unstable mode
        let scale = 0.5 * v1 * v1 + 0.5 * w * w * (c1 - zmp) * (c1 - zmp);
        energy_drift = energy_drift.max((orbital_energy(c1, v1, zmp, &p) - orbital_energy(c, v, zmp, &p)).abs() / scale);
        (c, v) = (c1, v1);
        let t = k as f64 * dt;
        let exact = zmp + (c0 - zmp) * (w * t).cosh() + v0 / w * (w * t).sinh();
        worst = worst.max(((c - exact) / exact.abs().max(1.0)).abs());
    }
    let (c_short, v_short) = (0..500).fold((c0, v0), |(c, v), _| lipm_step(c, v, zmp, &p, dt));
    let short = (orbital_energy(c_short, v_short, zmp, &p) - orbital_energy(c0, v0, zmp, &p)).abs();
    outcome(
        worst < 1e-12 && energy_drift < 1e-12 && short < 1e-12,
        format!("analytic mismatch {worst:.1e} (relative), per-step energy change {energy_drift:.1e} (relative), 1 s absolute drift {short:.1e}"),
    )
}

fn com_zmp_controller() -> Outcome {
    let p = PhysicalParams::default();
    let w = p.omega();
    let gains = FeedbackGains { k_c: 5.0, k_z: 2.0, ..FeedbackGains::default() };
    // The robot realises the commanded velocity exactly, so the CoP is the one for which
    // the controller output equals the current CoM velocity (the law is affine in p).
    let dt = 0.001;
    let (mut c, mut c_dot): (f64, f64) = (0.05, 0.0);
    let mut settled_at = None;
    let mut t = 0.0;
    while t < 2.0 + 1e-9 {
        if c.abs() < 0.005 {
            settled_at.get_or_insert(t);
        } else {
            settled_at = None;
        }
        let v0 = com_zmp_control_axis(c, 0.0, 0.0, 0.0, 0.0, &gains);
        let cop = (c_dot - v0) / gains.k_z;
        (c, c_dot) = lipm_step(c, c_dot, cop, &p, dt);
        t += dt;
    }
    let converged = settled_at.is_some() && c.abs() < 0.005;

    let mut grid_ok = true;
    let mut worst_re = f64::NEG_INFINITY;
    for i in 0..20 {
        for j in 0..20 {
            let k_z = w * (i as f64 + 0.5) / 20.0;
            let k_c = w * (1.0 + 0.05 + 2.0 * j as f64 / 19.0);
            let g = FeedbackGains { k_c, k_z, ..FeedbackGains::default() };
            grid_ok &= g.satisfies_stability_condition(w);
            let eig = com_zmp_system_matrix(w, k_c, k_z).complex_eigenvalues();
            for e in eig.iter() {
                worst_re = worst_re.max(e.re);
            }
        }
    }
    outcome(
        converged && grid_ok && worst_re < 0.0,
        format!(
            "|c - c_ref| = {:.2e} m at 2.0 s (below 5 mm from {:.3} s), max eigenvalue real part {worst_re:.3}",
            c.abs(),
            settled_at.unwrap_or(f64::NAN)
        ),
    )
}

fn push_recovery() -> Outcome {
    let mut base = ScenarioConfig::new(ScenarioKind::Push);
    base.duration_s = 7.0;
    let d: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let ladder = push_ladder(&base, &[3.0, 5.0, 10.0], &d).expect("ladder runs");
    let subset = ladder.iter().all(|e| !e.recovered_open_loop || e.recovered_feedback);
    let strict = ladder.iter().any(|e| e.recovered_feedback && !e.recovered_open_loop);
    let best = |f: fn(&humanoid_motion::sim::LadderEntry) -> bool| {
        ladder.iter().filter(|e| f(e)).map(|e| e.delta_v).fold(0.0, f64::max)
    };
    let (fb, ol) = (best(|e| e.recovered_feedback), best(|e| e.recovered_open_loop));
    let improvement = fb / ol - 1.0;
    let n_fb = ladder.iter().filter(|e| e.recovered_feedback).count();
    let n_ol = ladder.iter().filter(|e| e.recovered_open_loop).count();
    outcome(
        subset && strict && improvement >= 0.5,
        format!(
            "recovered {n_fb}/{} with feedback vs {n_ol} without, max dv {fb:.3} vs {ol:.3} m/s (+{:.0}%)",
            ladder.len(),
            improvement * 100.0
        ),
    )
}

fn kick_calibration() -> Outcome {
    let (gait, physical, ball) = (GaitParams::default(), PhysicalParams::default(), BallModel::default());
    let dist = |s: f64| simulate_kick(&KickProfile::default().with_strength(s), &gait, &physical, &ball).predicted_distance;
    let full = dist(1.0);
    let legacy = dist(LEGACY_STRENGTH);
    let sweep: Vec<f64> = (1..=10).map(|i| dist(i as f64 / 10.0)).collect();
    let monotone = sweep.windows(2).all(|w| w[1] >= w[0]);
    outcome(
        (full - 5.0).abs() <= 0.5 && legacy <= 3.0 && monotone,
        format!("{full:.2} m at strength 1.0, {legacy:.2} m at {LEGACY_STRENGTH}, monotone over 10 strengths: {monotone}"),
    )
}

fn waveform_math() -> Outcome {
    let w = KickWaveform {
        keypoints: vec![0.0, 0.3, -0.7, 1.0, -1.0, 0.4, 0.8, 0.2, -0.3, 0.0, 0.5, -0.5],
        amp_pos: 0.8,
        amp_neg: 0.3,
    };
    let anchors = w.keypoints.iter().enumerate().all(|(i, &k)| {
        let expect = if k >= 0.0 { k * w.amp_pos } else { k * w.amp_neg };
        eval_waveform(&w, i as f64 / 11.0) == expect
    });
    let unit = KickWaveform { amp_pos: 1.0, ..w.clone() };
    let mid = eval_waveform(&unit, 5.5 / 11.0);
    let (tau, dt) = (0.01, 0.001);
    let filtered = low_pass_trace(&vec![0.7; (10.0 * tau / dt) as usize + 1], tau, dt);
    let dc = filtered.last().copied().unwrap_or(f64::NAN);
    let mut step = vec![0.0];
    step.extend(vec![1.0; 40]);
    let rise = low_pass_trace(&step, tau, dt)[(tau / dt) as usize];
    let spacing: f64 = 0.33 / 11.0;
    let default_spacing = GaitParams::default().step_duration() / 11.0;
    outcome(
        anchors && (mid - 0.6).abs() < 1e-12 && (dc - 0.7).abs() < 1e-6 && (rise - 0.632).abs() < 0.01 && (spacing - 0.030).abs() < 1e-9,
        format!(
            "anchors exact {anchors}, midpoint {mid:.12}, DC {dc:.9}, step after tau {rise:.4}, spacing {:.1} ms (default gait {:.1} ms)",
            spacing * 1e3,
            default_spacing * 1e3
        ),
    )
}

fn interception() -> Outcome {
    let t = time_of_arrival(2.0, -1.0, 0.2, 0.0).expect("arrives");
    let root_ok = (t - (5.0 - 5f64.sqrt())).abs() < 1e-9 && (t - 2.76393).abs() < 1e-5;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut exact = true;
    for _ in 0..200 {
        let (p0, v, a) = (rng.gen_range(-5.0..5.0), rng.gen_range(-3.0..3.0), rng.gen_range(-2.0..2.0));
        let n = rng.gen_range(5..30);
        let samples: Vec<TrackSample> = (0..n)
            .map(|k| {
                let s = (k as f64 - (n - 1) as f64) * 0.03;
                let x = p0 + v * s + 0.5 * a * s * s;
                TrackSample { t: 10.0 + s, pos: [x, -x] }
            })
            .collect();
        let fit = fit_samples(&samples).expect("fit");
        exact &= (fit.p0[0] - p0).abs() < 1e-9 && (fit.v[0] - v).abs() < 1e-9 && (fit.a[0] - a).abs() < 1e-9;
    }
    let log = run_scenario(&ScenarioConfig::new(ScenarioKind::Intercept)).expect("intercept runs");
    let triggers = log.summary.kick_triggers.unwrap_or(0);
    let contacts = log.events().filter(|(_, e)| e.contains("contact")).count();
    outcome(
        root_ok && exact && triggers == 1 && contacts == 1,
        format!(
            "arrival {t:.12} s, noiseless fits exact {exact}, {triggers} trigger, {contacts} contact, ball travels {:.2} m",
            log.summary.distance
        ),
    )
}

fn perception() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut single = true;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..400 {
        let sigma = rng.gen_range(2.0..=6.0);
        let (cx, cy) = (40.0 + rng.gen_range(-0.5..=0.5), 36.0 + rng.gen_range(-0.5..=0.5));
        let h = render_gaussian((cx, cy), sigma, 80, 72).expect("render");
        let peaks = extract_peaks(&h, 0.5);
        single &= peaks.len() == 1;
        if let Some(p) = peaks.first() {
            worst = worst.max((p.x - cx).abs()).max((p.y - cy).abs());
        }
    }
    let (mut good, mut cross) = (0, 0);
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = (rng.gen_range(35.0..55.0), rng.gen_range(35.0..50.0));
        let b = (a.0 + rng.gen_range(100.0..130.0), rng.gen_range(35.0..50.0));
        let figs = [
            RobotFigure::upright(a, rng.gen_range(0.8..1.2)),
            RobotFigure::upright(b, rng.gen_range(0.8..1.2)),
        ];
        let scene = render_scene(&figs, 220, 100, 3.0).expect("scene");
        let poses = assemble_poses(&scene.peaks(0.5), &scene.limbs, &AssemblyParams::default());
        let mut owners = Vec::new();
        for pose in &poses {
            // each keypoint must come from the robot that owns the trunk
            let trunk = pose.keypoint(KeypointKind::Trunk).expect("trunk");
            let owner = if (trunk.x - a.0).abs() < (trunk.x - b.0).abs() { 0 } else { 1 };
            owners.push(owner);
            for k in &pose.keypoints {
                let (tx, ty) = figs[owner].get(k.kind);
                if (k.x - tx).abs() > 1.0 || (k.y - ty).abs() > 1.0 {
                    cross += 1;
                }
            }
        }
        owners.sort_unstable();
        if poses.len() == 2 && owners == [0, 1] {
            good += 1;
        }
    }
    outcome(
        single && worst < 0.5 && good == 100 && cross == 0,
        format!("planted centers max error {worst:.3} px, {good}/100 scenes with exactly 2 poses, {cross} cross-robot limbs"),
    )
}

fn determinism() -> Outcome {
    let mut same = Vec::new();
    for kind in [ScenarioKind::Walk, ScenarioKind::Push, ScenarioKind::Kick, ScenarioKind::Intercept] {
        let mut cfg = ScenarioConfig::new(kind);
        cfg.seed = 42;
        cfg.duration_s = 4.0;
        let a = run_scenario(&cfg).expect("run").to_csv();
        let b = run_scenario(&cfg).expect("run").to_csv();
        same.push((kind.name(), a.as_bytes() == b.as_bytes()));
    }
    let ok = same.iter().all(|(_, s)| *s);
    let detail: Vec<String> = same.iter().map(|(n, s)| format!("{n} {}", if *s { "identical" } else { "DIFFERENT" })).collect();
    outcome(ok, detail.join(", "))
}

fn main() {
    let criteria: [(&str, Option<Duration>, fn() -> Outcome); 10] = [
        ("pseudo-ZMP equation", Some(Duration::from_secs(1)), pseudo_zmp_equation),
        ("fused angles", Some(Duration::from_secs(5)), fused_angles),
        ("LIPM integrator", None, lipm_integrator),
        ("CoM-ZMP controller", Some(Duration::from_secs(10)), com_zmp_controller),
        ("push-recovery ordering", Some(Duration::from_secs(60)), push_recovery),
        ("kick calibration", None, kick_calibration),
        ("waveform math", None, waveform_math),
        ("interception", None, interception),
        ("perception post-processing", None, perception),
        ("determinism", None, determinism),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let out = check();
        let took = start.elapsed();
        let in_time = budget.is_none_or(|b| took <= b);
        let ok = out.ok && in_time;
        failed += usize::from(!ok);
        let limit = budget.map_or(String::new(), |b| format!(", limit {} s", b.as_secs()));
        println!(
            "{} {name}: {} [{:.2} s{limit}]",
            if ok { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
