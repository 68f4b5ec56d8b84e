//! Walks in place for a few seconds and prints the tracking quality and the first log rows.
//!
//! `cargo run --example walk_in_place -- examples/walk.json` uses a config file instead.

use humanoid_motion::sim::{run_scenario, ScenarioConfig, ScenarioKind};

fn main() -> humanoid_motion::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => ScenarioConfig::from_file(path.as_ref())?,
        None => ScenarioConfig::new(ScenarioKind::Walk),
    };
    let log = run_scenario(&cfg)?;
    let csv = log.to_csv();
    for line in csv.lines().step_by(250).take(8) {
        println!("{line}");
    }
    println!("{}", log.summary_json());
    Ok(())
}
