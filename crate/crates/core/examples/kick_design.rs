//! Evaluates the default kick waveforms and sweeps the kick strength.

use humanoid_motion::estimation::PhysicalParams;
use humanoid_motion::gait::GaitParams;
use humanoid_motion::kick::{eval_waveform, simulate_kick, KickProfile, WaveformDoc, LEGACY_STRENGTH};
use humanoid_motion::sim::BallModel;

fn main() {
    let profile = KickProfile::default();
    println!("phase  retract  swing");
    for i in 0..=11 {
        let phi = i as f64 / 11.0;
        println!(
            "{phi:5.3}  {:+.4}  {:+.4}",
            eval_waveform(&profile.retract, phi),
            eval_waveform(&profile.swing, phi)
        );
    }

    let (gait, physical, ball) = (GaitParams::default(), PhysicalParams::default(), BallModel::default());
    println!("\nstrength  peak m/s  contact m/s  distance m");
    for i in 0..=10 {
        let s = i as f64 / 10.0;
        let r = simulate_kick(&profile.clone().with_strength(s), &gait, &physical, &ball);
        let note = if (s - LEGACY_STRENGTH).abs() < 1e-9 { "  <- legacy strength" } else { "" };
        println!(
            "{s:8.1}  {:8.3}  {:11.3}  {:10.3}{note}",
            r.peak_foot_speed, r.contact_speed, r.predicted_distance
        );
    }
    println!("\n{}", WaveformDoc::from(&profile).to_json());
}
