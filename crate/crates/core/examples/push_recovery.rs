//! Pendulum push ladder with balance feedback on and off.

use humanoid_motion::sim::{push_ladder, ScenarioConfig, ScenarioKind};

fn main() -> humanoid_motion::Result<()> {
    let mut base = ScenarioConfig::new(ScenarioKind::Push);
    base.duration_s = 7.0;
    let retractions: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let ladder = push_ladder(&base, &[3.0, 5.0, 10.0], &retractions)?;

    println!("{:>6} {:>6} {:>8}  feedback  open loop", "mass", "d", "dv");
    let (mut best_fb, mut best_ol) = (0.0f64, 0.0f64);
    for e in &ladder {
        let mark = |ok: bool| if ok { "recovered" } else { "fell" };
        println!(
            "{:6.1} {:6.1} {:8.4}  {:9} {}",
            e.mass,
            e.retraction,
            e.delta_v,
            mark(e.recovered_feedback),
            mark(e.recovered_open_loop)
        );
        if e.recovered_feedback {
            best_fb = best_fb.max(e.delta_v);
        }
        if e.recovered_open_loop {
            best_ol = best_ol.max(e.delta_v);
        }
    }
    println!("largest recovered push: {best_fb:.3} m/s with feedback, {best_ol:.3} m/s without");
    Ok(())
}
