//! Fused angles orientation representation.
//!
//! Frame convention: x forward, y left, z up. A positive fused pitch tilts the
//! trunk forward, a positive fused roll tilts it to the right (rotation about +x).
//! Rotations map body coordinates to world coordinates.

use std::f64::consts::PI;

use nalgebra::{Quaternion, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const UNIT_NORM_TOL: f64 = 1e-6;
const TILT_SUM_TOL: f64 = 1e-12;

/// Unit quaternion with the double cover resolved to `w >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation(UnitQuaternion<f64>);

impl Rotation {
    pub fn identity() -> Self {
        Rotation(UnitQuaternion::identity())
    }

    /// Builds a rotation from raw components. The norm must be within 1e-6 of one.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let q = Quaternion::new(w, x, y, z);
        let norm = q.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::InvalidInput(format!(
                "quaternion norm {norm} is not unit"
            )));
        }
        Ok(Self::from_unit(UnitQuaternion::new_normalize(q)))
    }

    pub fn from_unit(q: UnitQuaternion<f64>) -> Self {
        if q.w < 0.0 {
            Rotation(UnitQuaternion::new_unchecked(-q.into_inner()))
        } else {
            Rotation(q)
        }
    }

    pub fn from_axis_angle(axis: Vector3<f64>, angle: f64) -> Self {
        let axis = nalgebra::Unit::new_normalize(axis);
        Self::from_unit(UnitQuaternion::from_axis_angle(&axis, angle))
    }

    pub fn w(&self) -> f64 {
        self.0.w
    }
    pub fn x(&self) -> f64 {
        self.0.i
    }
    pub fn y(&self) -> f64 {
        self.0.j
    }
    pub fn z(&self) -> f64 {
        self.0.k
    }

    pub fn as_unit_quaternion(&self) -> &UnitQuaternion<f64> {
        &self.0
    }

    /// World z axis expressed in body coordinates (the "up" direction seen by an accelerometer).
    pub fn up_in_body(&self) -> Vector3<f64> {
        self.0.inverse_transform_vector(&Vector3::z())
    }

    pub fn compose(&self, rhs: &Rotation) -> Rotation {
        Self::from_unit(self.0 * rhs.0)
    }

    /// Distance that ignores the sign ambiguity of the double cover.
    pub fn distance(&self, other: &Rotation) -> f64 {
        let a = self.0.into_inner();
        let b = other.0.into_inner();
        (a - b).norm().min((a + b).norm())
    }
}

impl Default for Rotation {
    fn default() -> Self {
        Self::identity()
    }
}

/// Hemisphere of the trunk z axis: `Upper` when the tilt is at most 90 degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hemisphere {
    Upper,
    Lower,
}

impl Hemisphere {
    pub fn sign(self) -> f64 {
        match self {
            Hemisphere::Upper => 1.0,
            Hemisphere::Lower => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FusedAngles {
    pub yaw: f64,
    pub pitch: f64,
    pub roll: f64,
    pub hemisphere: Hemisphere,
}

impl FusedAngles {
    pub fn new(yaw: f64, pitch: f64, roll: f64, hemisphere: Hemisphere) -> Self {
        FusedAngles {
            yaw,
            pitch,
            roll,
            hemisphere,
        }
    }

    pub fn upright() -> Self {
        Self::new(0.0, 0.0, 0.0, Hemisphere::Upper)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.yaw.is_finite() && self.pitch.is_finite() && self.roll.is_finite();
        if !finite {
            return Err(Error::InvalidInput("non-finite fused angle".into()));
        }
        if self.pitch.abs() > PI / 2.0 || self.roll.abs() > PI / 2.0 {
            return Err(Error::InvalidInput(
                "fused pitch and roll must lie in [-pi/2, pi/2]".into(),
            ));
        }
        let s = self.pitch.sin().powi(2) + self.roll.sin().powi(2);
        if s > 1.0 + TILT_SUM_TOL {
            return Err(Error::InvalidInput(format!(
                "sin^2(pitch) + sin^2(roll) = {s} exceeds 1"
            )));
        }
        Ok(())
    }
}

pub(crate) fn wrap_angle(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid can round up to exactly 2*pi
    if w >= PI {
        w - 2.0 * PI
    } else {
        w
    }
}

pub fn fused_from_rotation(q: &Rotation) -> FusedAngles {
    let (w, x, y, z) = (q.w(), q.x(), q.y(), q.z());
    let sin_pitch = (2.0 * (w * y - x * z)).clamp(-1.0, 1.0);
    let sin_roll = (2.0 * (w * x + y * z)).clamp(-1.0, 1.0);
    let cos_tilt = 1.0 - 2.0 * (x * x + y * y);
    let hemisphere = if cos_tilt >= 0.0 {
        Hemisphere::Upper
    } else {
        Hemisphere::Lower
    };
    FusedAngles {
        yaw: wrap_angle(2.0 * z.atan2(w)),
        pitch: sin_pitch.asin(),
        roll: sin_roll.asin(),
        hemisphere,
    }
}

/// Pure tilt rotation (zero fused yaw) that maps world up onto the given body-frame up vector.
///
/// `up` holds `(-sin pitch, sin roll, cos tilt)`.
pub(crate) fn tilt_from_up(sin_pitch: f64, sin_roll: f64, cos_tilt: f64) -> UnitQuaternion<f64> {
    let s = sin_pitch.hypot(sin_roll);
    let q = if cos_tilt >= 0.0 {
        Quaternion::new(1.0 + cos_tilt, sin_roll, sin_pitch, 0.0)
    } else if s > 0.0 {
        let k = (1.0 - cos_tilt) / s;
        Quaternion::new(s, k * sin_roll, k * sin_pitch, 0.0)
    } else {
        // upside down: any horizontal axis works
        Quaternion::new(0.0, 1.0, 0.0, 0.0)
    };
    UnitQuaternion::new_normalize(q)
}

pub fn rotation_from_fused(f: &FusedAngles) -> Result<Rotation> {
    f.validate()?;
    let sp = f.pitch.sin();
    let sr = f.roll.sin();
    let cos_tilt = f.hemisphere.sign() * (1.0 - sp * sp - sr * sr).max(0.0).sqrt();
    let tilt = tilt_from_up(sp, sr, cos_tilt);
    let yaw = UnitQuaternion::from_axis_angle(&Vector3::z_axis(), f.yaw);
    Ok(Rotation::from_unit(yaw * tilt))
}

/// Sagittal and lateral tilt components `(pitch, roll)`.
pub fn tilt_components(f: &FusedAngles) -> (f64, f64) {
    (f.pitch, f.roll)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::Matrix3;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn axis_angle_matrix(axis: Vector3<f64>, angle: f64) -> Matrix3<f64> {
        // Rodrigues formula, independent of the quaternion path
        let k = axis.normalize();
        let kx = Matrix3::new(0.0, -k.z, k.y, k.z, 0.0, -k.x, -k.y, k.x, 0.0);
        Matrix3::identity() + kx * angle.sin() + kx * kx * (1.0 - angle.cos())
    }

    #[test]
    fn identity_is_upright() {
        let f = fused_from_rotation(&Rotation::identity());
        assert_eq!(f, FusedAngles::upright());
        assert_eq!(tilt_components(&f), (0.0, 0.0));
    }

    #[test]
    fn pure_pitch_matches_matrix_oracle() {
        let m = axis_angle_matrix(Vector3::y(), 0.3);
        // fused pitch is asin(-R31)
        assert_abs_diff_eq!((-m[(2, 0)]).asin(), 0.3, epsilon = 1e-15);
        let f = fused_from_rotation(&Rotation::from_axis_angle(Vector3::y(), 0.3));
        assert_abs_diff_eq!(f.yaw, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.pitch, 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(f.roll, 0.0, epsilon = 1e-12);
        assert_eq!(f.hemisphere, Hemisphere::Upper);
    }

    #[test]
    fn rotation_matrix_rows_agree_with_quaternion_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let axis = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let angle = rng.gen_range(-3.0..3.0);
            let m = axis_angle_matrix(axis, angle);
            let f = fused_from_rotation(&Rotation::from_axis_angle(axis, angle));
            assert_abs_diff_eq!(f.pitch.sin(), -m[(2, 0)], epsilon = 1e-12);
            assert_abs_diff_eq!(f.roll.sin(), m[(2, 1)], epsilon = 1e-12);
            assert_eq!(f.hemisphere == Hemisphere::Upper, m[(2, 2)] >= 0.0);
        }
    }

    #[test]
    fn rejects_non_unit_quaternion() {
        assert!(Rotation::new(1.0, 0.1, 0.0, 0.0).is_err());
        assert!(Rotation::new(1.0 + 1e-8, 0.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn zero_and_pure_yaw_reconstruction() {
        let q = rotation_from_fused(&FusedAngles::upright()).unwrap();
        assert!(q.distance(&Rotation::identity()) < 1e-15);
        let q = rotation_from_fused(&FusedAngles::new(0.5, 0.0, 0.0, Hemisphere::Upper)).unwrap();
        let yaw = Rotation::from_axis_angle(Vector3::z(), 0.5);
        assert!(q.distance(&yaw) < 1e-15);
    }

    #[test]
    fn rejects_invalid_tilt_pair() {
        let f = FusedAngles::new(0.0, 1.0, 1.0, Hemisphere::Upper);
        assert!(rotation_from_fused(&f).is_err());
    }

    #[test]
    fn random_quaternions_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let q = random_rotation(&mut rng);
            let back = rotation_from_fused(&fused_from_rotation(&q)).unwrap();
            assert!(q.distance(&back) < 1e-9);
        }
    }

    #[test]
    fn lower_hemisphere_only_beyond_right_angle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let q = random_rotation(&mut rng);
            let tilt = q.up_in_body().z.clamp(-1.0, 1.0).acos();
            let f = fused_from_rotation(&q);
            if tilt < PI / 2.0 - 1e-12 {
                assert_eq!(f.hemisphere, Hemisphere::Upper);
            }
            if tilt > PI / 2.0 + 1e-12 {
                assert_eq!(f.hemisphere, Hemisphere::Lower);
            }
        }
    }

    pub(crate) fn random_rotation(rng: &mut impl Rng) -> Rotation {
        loop {
            let v: [f64; 4] = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            if n > 0.1 && n <= 1.0 {
                return Rotation::new(v[0] / n, v[1] / n, v[2] / n, v[3] / n).unwrap();
            }
        }
    }

    fn valid_fused() -> impl Strategy<Value = FusedAngles> {
        (-PI..PI, -1.0f64..1.0, -1.0f64..1.0).prop_filter_map("tilt pair", |(yaw, a, b)| {
            if a * a + b * b > 1.0 {
                return None;
            }
            Some(FusedAngles::new(yaw, a.asin(), b.asin(), Hemisphere::Upper))
        })
    }

    proptest! {
        #[test]
        fn fused_round_trip(f in valid_fused()) {
            let back = fused_from_rotation(&rotation_from_fused(&f).unwrap());
            prop_assert!((back.pitch - f.pitch).abs() < 1e-9);
            prop_assert!((back.roll - f.roll).abs() < 1e-9);
            prop_assert!(wrap_angle(back.yaw - f.yaw).abs() < 1e-9);
            prop_assert_eq!(back.hemisphere, Hemisphere::Upper);
        }

        #[test]
        fn tilt_is_yaw_independent(f in valid_fused(), yaw in -PI..PI) {
            let q = rotation_from_fused(&f).unwrap();
            let turned = Rotation::from_axis_angle(Vector3::z(), yaw).compose(&q);
            let (p0, r0) = tilt_components(&fused_from_rotation(&q));
            let (p1, r1) = tilt_components(&fused_from_rotation(&turned));
            prop_assert!((p0 - p1).abs() < 1e-9);
            prop_assert!((r0 - r1).abs() < 1e-9);
        }
    }
}
