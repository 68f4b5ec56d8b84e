use nalgebra::Matrix2;

use super::{FeedbackGains, ReferenceState};
use crate::estimation::ComState;

/// CoM-ZMP controller on one axis. Returns the commanded CoM velocity:
///
/// `c_dot_ref + k_c (c_ref - c) - k_z (p_ref + offset - p_hat)`
pub fn com_zmp_control_axis(c: f64, p_hat: f64, c_ref: f64, c_dot_ref: f64, p_target: f64, gains: &FeedbackGains) -> f64 {
    c_dot_ref + gains.k_c * (c_ref - c) - gains.k_z * (p_target - p_hat)
}

/// Both axes. `p_hat` is the pseudo-ZMP observed on the robot.
pub fn com_zmp_control(est: &ComState, p_hat: [f64; 2], reference: &ReferenceState, gains: &FeedbackGains) -> [f64; 2] {
    let c = [est.x.c, est.y.c];
    std::array::from_fn(|i| {
        com_zmp_control_axis(
            c[i],
            p_hat[i],
            reference.c_ref[i],
            reference.c_dot_ref[i],
            reference.p_ref[i] + reference.zmp_offset[i],
            gains,
        )
    })
}

/// Error dynamics of `(c - c_ref, p - p_ref)` when the LIPM tracks the commanded velocity
/// exactly.
pub fn com_zmp_system_matrix(omega: f64, k_c: f64, k_z: f64) -> Matrix2<f64> {
    let w2 = omega * omega;
    Matrix2::new(-k_c, k_z, (w2 - k_c * k_c) / k_z, (k_c * k_z - w2) / k_z)
}
