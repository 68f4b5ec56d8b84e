use std::f64::consts::PI;

use super::FeedbackGains;
use crate::estimation::Foot;
use crate::gait::GaitPhase;

/// Swing angle offsets `(sagittal, lateral)` for each leg, rad.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SwingOffsets {
    pub left: (f64, f64),
    pub right: (f64, f64),
}

impl SwingOffsets {
    pub fn leg(&self, leg: Foot) -> (f64, f64) {
        match leg {
            Foot::Left => self.left,
            Foot::Right => self.right,
        }
    }
}

fn window_weight(leg_phase: f64, fade_fraction: f64) -> f64 {
    if leg_phase < 0.0 {
        1.0
    } else if fade_fraction > 0.0 && leg_phase < fade_fraction * PI {
        1.0 - leg_phase / (fade_fraction * PI)
    } else {
        0.0
    }
}

/// Tilt-proportional swing offsets. Full offset during the leg's swing, linear fade
/// after touchdown over `fade_fraction` of the step, zero for the rest of the support.
///
/// `tilt` is the deviation `(pitch, roll)` from the reference (upright) tilt.
pub fn swing_leg_feedback(tilt: (f64, f64), phase: &GaitPhase, gains: &FeedbackGains) -> SwingOffsets {
    let raw = (gains.k_swing_sagittal * tilt.0, gains.k_swing_lateral * tilt.1);
    let per_leg = |leg| {
        let w = window_weight(phase.leg_phase(leg), gains.fade_fraction);
        (w * raw.0, w * raw.1)
    };
    SwingOffsets {
        left: per_leg(Foot::Left),
        right: per_leg(Foot::Right),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn gains() -> FeedbackGains {
        FeedbackGains::default()
    }

    #[test]
    fn zero_tilt_zero_offsets() {
        let o = swing_leg_feedback((0.0, 0.0), &GaitPhase::new(-1.0, 1.4), &gains());
        assert_eq!(o, SwingOffsets::default());
    }

    #[test]
    fn forward_tilt_swings_forward_mid_swing() {
        let o = swing_leg_feedback((0.1, 0.0), &GaitPhase::new(-PI / 2.0, 1.4), &gains());
        assert_abs_diff_eq!(o.left.0, 0.08, epsilon = 1e-15);
        assert_eq!(o.right, (0.0, 0.0));
    }

    #[test]
    fn fade_is_linear() {
        let g = gains();
        // left leg half way through its fade window
        let mu = 0.5 * g.fade_fraction * PI;
        let o = swing_leg_feedback((0.1, 0.0), &GaitPhase::new(mu, 1.4), &g);
        assert_abs_diff_eq!(o.left.0, 0.04, epsilon = 1e-12);
        // right leg is swinging at the same time
        assert_abs_diff_eq!(o.right.0, 0.08, epsilon = 1e-15);
    }

    #[test]
    fn zero_outside_windows() {
        let g = gains();
        for k in 0..1000 {
            let mu = -PI + k as f64 * 2.0 * PI / 1000.0;
            let ph = GaitPhase::new(mu, 1.4);
            let o = swing_leg_feedback((0.2, -0.1), &ph, &g);
            for leg in [Foot::Left, Foot::Right] {
                let lp = ph.leg_phase(leg);
                if lp >= g.fade_fraction * PI {
                    assert_eq!(o.leg(leg), (0.0, 0.0));
                }
            }
        }
    }
}
