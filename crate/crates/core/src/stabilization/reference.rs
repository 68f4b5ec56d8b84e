use super::leaky_integrate;
use crate::estimation::PhysicalParams;
use crate::gait::{GaitCommand, GaitParams, GaitPhase};

/// Reference pseudo-CoM and pseudo-ZMP, per axis `[sagittal, lateral]`.
///
/// Expressed in the stance frame: origin below the nominal hip center of the current
/// support, so the support foot center sits at `(0, +-hip_width / 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReferenceState {
    pub c_ref: [f64; 2],
    pub c_dot_ref: [f64; 2],
    pub c_ddot_ref: [f64; 2],
    pub p_ref: [f64; 2],
    /// Adapted offset from the support foot center toward the observed ZMP.
    pub zmp_offset: [f64; 2],
}

/// Nominal reference motion of a second, feedback-free gait generator: the periodic
/// LIPM orbit for a ZMP fixed at the support foot center during each step.
pub fn reference_cpg(phase: &GaitPhase, cmd: &GaitCommand, gait: &GaitParams, physical: &PhysicalParams) -> ReferenceState {
    let omega = physical.omega();
    let step = 0.5 / phase.frequency;
    let tau = phase.step_progress() * step;
    let u = omega * (tau - 0.5 * step);
    let half = omega * 0.5 * step;

    let foot_y = phase.support_leg().sign() * gait.hip_width / 2.0;
    let leg = gait.stance_leg_length();
    let stride_x = 2.0 * leg * (gait.swing_sagittal_max * cmd.vx).sin();
    let stride_y = 2.0 * leg * (gait.swing_lateral_max * cmd.vy).sin();

    // stepping in place: c - p = -(p / cosh(half)) cosh(u)
    let sway = foot_y / half.cosh();
    // stride: c - p runs from -stride/2 to +stride/2 across the step
    let kx = 0.5 * stride_x / half.sinh();
    let ky = 0.5 * stride_y / half.sinh();

    let (su, cu) = (u.sinh(), u.cosh());
    let w2 = omega * omega;
    let c = [kx * su, foot_y - sway * cu + ky * su];
    let c_dot = [kx * omega * cu, -sway * omega * su + ky * omega * cu];
    let p = [0.0, foot_y];
    ReferenceState {
        c_ref: c,
        c_dot_ref: c_dot,
        c_ddot_ref: [w2 * (c[0] - p[0]), w2 * (c[1] - p[1])],
        p_ref: p,
        zmp_offset: [0.0, 0.0],
    }
}

/// Leaky integration of the observed ZMP deviation into the reference offset,
/// bounded by the foot half length.
pub fn match_zmp_offset(reference: &ReferenceState, p_hat_observed: [f64; 2], leak_tau: f64, dt: f64, bound: f64) -> ReferenceState {
    let mut out = *reference;
    for i in 0..2 {
        let deviation = p_hat_observed[i] - reference.p_ref[i];
        out.zmp_offset[i] = leaky_integrate(reference.zmp_offset[i], deviation, leak_tau, dt).clamp(-bound, bound);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::lipm_step;
    use std::f64::consts::PI;

    fn setup() -> (GaitParams, PhysicalParams) {
        (GaitParams::default(), PhysicalParams::default())
    }

    #[test]
    fn in_place_reference_alternates_feet() {
        let (g, p) = setup();
        let left_support = reference_cpg(&GaitPhase::new(0.5, g.frequency), &GaitCommand::default(), &g, &p);
        let right_support = reference_cpg(&GaitPhase::new(-0.5, g.frequency), &GaitCommand::default(), &g, &p);
        assert_eq!(left_support.p_ref, [0.0, 0.1]);
        assert_eq!(right_support.p_ref, [0.0, -0.1]);
        for k in 0..500 {
            let r = reference_cpg(&GaitPhase::new(-PI + k as f64 * 0.01257, g.frequency), &GaitCommand::default(), &g, &p);
            assert_eq!(r.c_ref[0], 0.0);
            assert_eq!(r.c_dot_ref[0], 0.0);
            assert!(r.c_ref[1].abs() < g.hip_width / 2.0);
        }
    }

    #[test]
    fn deterministic_and_periodic() {
        let (g, p) = setup();
        let cmd = GaitCommand::new(0.6, -0.3, 0.0);
        for k in 0..200 {
            let mu = -PI + k as f64 * 2.0 * PI / 200.0;
            let a = reference_cpg(&GaitPhase::new(mu, g.frequency), &cmd, &g, &p);
            let b = reference_cpg(&GaitPhase::new(mu, g.frequency), &cmd, &g, &p);
            assert_eq!(a, b);
            let c = reference_cpg(&GaitPhase::new(mu + 2.0 * PI, g.frequency), &cmd, &g, &p);
            for i in 0..2 {
                assert!((a.c_ref[i] - c.c_ref[i]).abs() < 1e-12);
                assert!((a.c_dot_ref[i] - c.c_dot_ref[i]).abs() < 1e-12);
                assert_eq!(a.p_ref[i], c.p_ref[i]);
            }
        }
    }

    #[test]
    fn reference_is_a_lipm_solution_within_a_step() {
        // integrate the exact pendulum map from the reference at step start
        let (g, p) = setup();
        let cmd = GaitCommand::new(0.5, 0.4, 0.0);
        let dt = 1e-3;
        let mut ph = GaitPhase::new(1e-9, g.frequency);
        let start = reference_cpg(&ph, &cmd, &g, &p);
        let mut state = [(start.c_ref[0], start.c_dot_ref[0]), (start.c_ref[1], start.c_dot_ref[1])];
        for _ in 0..300 {
            for (i, s) in state.iter_mut().enumerate() {
                *s = lipm_step(s.0, s.1, start.p_ref[i], &p, dt);
            }
            ph = crate::gait::advance_phase(&ph, dt);
            let r = reference_cpg(&ph, &cmd, &g, &p);
            for i in 0..2 {
                assert!((state[i].0 - r.c_ref[i]).abs() < 1e-9);
                assert!((state[i].1 - r.c_dot_ref[i]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn velocity_continuous_across_support_exchange() {
        let (g, p) = setup();
        let cmd = GaitCommand::new(0.5, 0.0, 0.0);
        let before = reference_cpg(&GaitPhase::new(-1e-9, g.frequency), &cmd, &g, &p);
        let after = reference_cpg(&GaitPhase::new(0.0, g.frequency), &cmd, &g, &p);
        assert!((before.c_dot_ref[0] - after.c_dot_ref[0]).abs() < 1e-6);
        assert!((before.c_dot_ref[1] - after.c_dot_ref[1]).abs() < 1e-6);
    }

    #[test]
    fn offset_converges_to_persistent_bias() {
        let (leak_tau, dt) = (0.5, 0.002);
        let mut r = ReferenceState::default();
        let steps = (5.0_f64 * leak_tau / dt).round() as usize;
        for _ in 0..steps {
            r = match_zmp_offset(&r, [0.02, 0.0], leak_tau, dt, 0.12);
        }
        // first-order oracle: 0.02 (1 - e^-5)
        let expected = 0.02 * (1.0 - (-5.0f64).exp());
        assert!((r.zmp_offset[0] - expected).abs() < 1e-12);
        let more = (1.0_f64 * leak_tau / dt).round() as usize;
        for _ in 0..more {
            r = match_zmp_offset(&r, [0.02, 0.0], leak_tau, dt, 0.12);
        }
        assert!((r.zmp_offset[0] - 0.02).abs() < 1e-4);
    }

    #[test]
    fn offset_decays_without_bias_and_clamps() {
        let mut r = ReferenceState {
            zmp_offset: [0.05, -0.05],
            ..ReferenceState::default()
        };
        for _ in 0..20_000 {
            r = match_zmp_offset(&r, [0.0, 0.0], 0.5, 0.002, 0.12);
        }
        assert!(r.zmp_offset[0].abs() < 1e-12 && r.zmp_offset[1].abs() < 1e-12);
        for _ in 0..20_000 {
            r = match_zmp_offset(&r, [0.2, -0.3], 0.5, 0.002, 0.12);
        }
        assert_eq!(r.zmp_offset, [0.12, -0.12]);
    }
}
