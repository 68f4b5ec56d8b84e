use nalgebra::{Matrix2, RowVector2, Vector2};
use serde::{Deserialize, Serialize};

use super::{pseudo_zmp, PhysicalParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KfNoise {
    /// White acceleration noise density of the process model.
    pub q_proc: f64,
    /// Variance of the kinematic pseudo-CoM measurement, m^2.
    pub r_meas: f64,
    /// Time constant of the low-pass on the reported acceleration, s. Zero disables it.
    pub accel_tau: f64,
}

impl Default for KfNoise {
    fn default() -> Self {
        KfNoise {
            q_proc: 1e-4,
            r_meas: 1e-4,
            accel_tau: 0.02,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KfStatus {
    Updated,
    /// The measurement was not finite; only the prediction was applied.
    Outlier,
}

/// Pseudo-CoM filter state on one horizontal axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComAxisState {
    pub c: f64,
    pub c_dot: f64,
    pub c_ddot: f64,
    pub covariance: Matrix2<f64>,
}

impl ComAxisState {
    pub fn at(c: f64) -> Self {
        ComAxisState {
            c,
            c_dot: 0.0,
            c_ddot: 0.0,
            covariance: Matrix2::identity() * 1e-4,
        }
    }
}

impl Default for ComAxisState {
    fn default() -> Self {
        Self::at(0.0)
    }
}

/// Constant-acceleration predict with the measured acceleration as input, then a
/// position correction from the kinematic pseudo-CoM.
pub fn com_kf_update(
    state: &ComAxisState,
    measured_com: f64,
    measured_accel: f64,
    dt: f64,
    noise: &KfNoise,
) -> (ComAxisState, KfStatus) {
    let accel_ok = measured_accel.is_finite();
    let accel = if accel_ok { measured_accel } else { 0.0 };

    let f = Matrix2::new(1.0, dt, 0.0, 1.0);
    let b = Vector2::new(0.5 * dt * dt, dt);
    let q = noise.q_proc * Matrix2::new(dt.powi(3) / 3.0, dt * dt / 2.0, dt * dt / 2.0, dt);

    let mut x = f * Vector2::new(state.c, state.c_dot) + b * accel;
    let mut p = f * state.covariance * f.transpose() + q;

    let status = if measured_com.is_finite() && accel_ok {
        let h = RowVector2::new(1.0, 0.0);
        let s = p[(0, 0)] + noise.r_meas;
        let k = p.column(0) / s;
        x += k * (measured_com - x[0]);
        // Joseph form keeps the covariance symmetric and PSD
        let i_kh = Matrix2::identity() - k * h;
        p = i_kh * p * i_kh.transpose() + k * noise.r_meas * k.transpose();
        KfStatus::Updated
    } else {
        KfStatus::Outlier
    };
    p = 0.5 * (p + p.transpose());

    let c_ddot = if !accel_ok {
        state.c_ddot
    } else if noise.accel_tau > 0.0 {
        let a = (-dt / noise.accel_tau).exp();
        a * state.c_ddot + (1.0 - a) * accel
    } else {
        accel
    };

    (
        ComAxisState {
            c: x[0],
            c_dot: x[1],
            c_ddot,
            covariance: p,
        },
        status,
    )
}

/// Sagittal (x) and lateral (y) filter states.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComState {
    pub x: ComAxisState,
    pub y: ComAxisState,
}

impl ComState {
    pub fn zmp(&self, params: &PhysicalParams) -> [f64; 2] {
        [
            pseudo_zmp(self.x.c, self.x.c_ddot, params),
            pseudo_zmp(self.y.c, self.y.c_ddot, params),
        ]
    }
}

#[derive(Debug, Clone)]
pub struct ComEstimator {
    pub state: ComState,
    pub noise: KfNoise,
    pub outliers: usize,
}

impl ComEstimator {
    pub fn new(noise: KfNoise, start: [f64; 2]) -> Self {
        ComEstimator {
            state: ComState {
                x: ComAxisState::at(start[0]),
                y: ComAxisState::at(start[1]),
            },
            noise,
            outliers: 0,
        }
    }

    pub fn update(&mut self, measured_com: [f64; 2], measured_accel: [f64; 2], dt: f64) -> &ComState {
        let (x, sx) = com_kf_update(&self.state.x, measured_com[0], measured_accel[0], dt, &self.noise);
        let (y, sy) = com_kf_update(&self.state.y, measured_com[1], measured_accel[1], dt, &self.noise);
        self.outliers += usize::from(sx == KfStatus::Outlier) + usize::from(sy == KfStatus::Outlier);
        self.state = ComState { x, y };
        &self.state
    }
}
