//! A ball rolls toward the robot; the track fit times the kick so the foot meets it.

use humanoid_motion::sim::{run_scenario_with_messages, ScenarioConfig, ScenarioKind};
use humanoid_motion::skills::parse_controller_line;

fn main() -> humanoid_motion::Result<()> {
    let cfg = ScenarioConfig::new(ScenarioKind::Intercept);
    let script = [
        (0.0, r#"{"phase": "READY"}"#),
        (0.2, r#"{"phase": "SET"}"#),
        (0.3, r#"{"phase": "HALFTIME"}"#),
        (0.4, r#"{"phase": "PLAY"}"#),
    ];
    let msgs: Vec<_> = script.iter().map(|(t, line)| (*t, parse_controller_line(line))).collect();
    let log = run_scenario_with_messages(&cfg, &msgs)?;
    for (t, event) in log.events() {
        println!("{t:6.3} s  {event}");
    }
    println!("{}", log.summary_json());
    Ok(())
}
