use nalgebra::{Unit, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::fused_angles::{fused_from_rotation, tilt_from_up, FusedAngles, Rotation};

/// Body-frame IMU reading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImuSample {
    /// Angular rate, rad/s.
    pub gyro: Vector3<f64>,
    /// Specific force including gravity, m/s^2.
    pub accel: Vector3<f64>,
    pub dt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComplementaryGains {
    /// Rate at which the tilt converges to the accelerometer, 1/s.
    pub k_acc: f64,
    pub g: f64,
}

impl Default for ComplementaryGains {
    fn default() -> Self {
        ComplementaryGains { k_acc: 0.5, g: 9.81 }
    }
}

/// One filter step. Gyro integration first, then a tilt-only pull toward the measured
/// gravity direction. The fused yaw of the gyro prediction is kept untouched.
///
/// Accelerometer readings below half of `g` (free fall, impacts) skip the correction.
pub fn complementary_update(state: &Rotation, imu: &ImuSample, gains: &ComplementaryGains) -> Rotation {
    let delta = UnitQuaternion::from_scaled_axis(imu.gyro * imu.dt);
    let predicted = UnitQuaternion::new_normalize((state.as_unit_quaternion() * delta).into_inner());
    let predicted = Rotation::from_unit(predicted);

    let accel_norm = imu.accel.norm();
    if !accel_norm.is_finite() || accel_norm < 0.5 * gains.g {
        return predicted;
    }

    let up_est = predicted.up_in_body();
    let up_meas = imu.accel / accel_norm;
    let axis = up_est.cross(&up_meas);
    let sin_err = axis.norm();
    if sin_err < 1e-15 && up_est.dot(&up_meas) > 0.0 {
        return predicted;
    }
    let err = sin_err.atan2(up_est.dot(&up_meas));
    let fraction = 1.0 - (-gains.k_acc * imu.dt).exp();
    let axis = if sin_err > 1e-15 {
        Unit::new_normalize(axis)
    } else {
        // antiparallel: pick any axis orthogonal to up_est
        Unit::new_normalize(up_est.cross(&Vector3::x()).try_normalize(1e-9).unwrap_or_else(Vector3::y))
    };
    let up_new = UnitQuaternion::from_axis_angle(&axis, fraction * err) * up_est;

    let yaw = fused_from_rotation(&predicted).yaw;
    let tilt = tilt_from_up(-up_new.x, up_new.y, up_new.z);
    Rotation::from_unit(UnitQuaternion::from_axis_angle(&Vector3::z_axis(), yaw) * tilt)
}

/// Stateful wrapper around [`complementary_update`].
#[derive(Debug, Clone)]
pub struct ComplementaryFilter {
    orientation: Rotation,
    gains: ComplementaryGains,
}

impl ComplementaryFilter {
    pub fn new(gains: ComplementaryGains) -> Self {
        ComplementaryFilter {
            orientation: Rotation::identity(),
            gains,
        }
    }

    pub fn with_orientation(mut self, q: Rotation) -> Self {
        self.orientation = q;
        self
    }

    pub fn update(&mut self, imu: &ImuSample) -> &Rotation {
        self.orientation = complementary_update(&self.orientation, imu, &self.gains);
        &self.orientation
    }

    pub fn orientation(&self) -> &Rotation {
        &self.orientation
    }

    pub fn fused(&self) -> FusedAngles {
        fused_from_rotation(&self.orientation)
    }
}
