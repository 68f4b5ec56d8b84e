//! Runs the attitude and CoM estimators on a synthetic sway with sensor noise.

use humanoid_motion::estimation::{
    pseudo_zmp, ComEstimator, ComplementaryFilter, ComplementaryGains, ImuSample, KfNoise, PhysicalParams,
};
use humanoid_motion::fused_angles::Rotation;
use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() {
    let params = PhysicalParams::default();
    let dt = 0.005;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let gyro_noise = Normal::new(0.0, 0.01).unwrap();
    let com_noise = Normal::new(0.0, 0.002).unwrap();

    // the robot starts 0.2 rad pitched; the filter believes it is upright
    let truth = Rotation::from_axis_angle(Vector3::y(), 0.2);
    let mut imu = ComplementaryFilter::new(ComplementaryGains::default());
    let mut kf = ComEstimator::new(KfNoise::default(), [0.0, 0.0]);

    let (a, f) = (0.03, 0.7);
    let w = 2.0 * std::f64::consts::PI * f;
    for k in 1..=1000 {
        let t = k as f64 * dt;
        let gyro = Vector3::new(gyro_noise.sample(&mut rng), gyro_noise.sample(&mut rng), gyro_noise.sample(&mut rng));
        let accel = truth.up_in_body() * params.g;
        imu.update(&ImuSample { gyro, accel, dt });

        let c = a * (w * t).sin();
        let c_ddot = -a * w * w * (w * t).sin();
        let est = kf.update([c + com_noise.sample(&mut rng), 0.0], [c_ddot, 0.0], dt);
        if k % 200 == 0 {
            let fused = imu.fused();
            println!(
                "t {t:4.1}  pitch est {:.4} (true 0.2000)  c {:+.4} est {:+.4}  zmp est {:+.4} true {:+.4}",
                fused.pitch,
                c,
                est.x.c,
                est.zmp(&params)[0],
                pseudo_zmp(c, c_ddot, &params)
            );
        }
    }
}
