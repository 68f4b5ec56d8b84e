//! Converts a few orientations to fused angles and back.

use humanoid_motion::fused_angles::{fused_from_rotation, rotation_from_fused, Rotation};
use nalgebra::Vector3;

fn main() -> humanoid_motion::Result<()> {
    let cases = [
        ("pitched forward 20 deg", Vector3::y(), 20f64.to_radians()),
        ("rolled left 15 deg", Vector3::x(), -15f64.to_radians()),
        ("turned 90 deg", Vector3::z(), 90f64.to_radians()),
        ("tilted about a diagonal", Vector3::new(1.0, 1.0, 0.3), 0.6),
    ];
    for (name, axis, angle) in cases {
        let q = Rotation::from_axis_angle(axis, angle);
        let f = fused_from_rotation(&q);
        let back = rotation_from_fused(&f)?;
        println!(
            "{name:26} yaw {:+.4} pitch {:+.4} roll {:+.4} {:?}  roundtrip {:.1e}",
            f.yaw,
            f.pitch,
            f.roll,
            f.hemisphere,
            q.distance(&back)
        );
    }
    Ok(())
}
