//! Feeds game-controller messages and world observations through the behavior machine.

use humanoid_motion::skills::{parse_controller_line, Action, Agent, World};

fn main() {
    let mut agent = Agent::default();
    let world = |ball_dist: f64, aligned: bool| World {
        ball_visible: true,
        ball_dist,
        obstacle_ahead: false,
        aligned,
    };
    let script: [(Option<&str>, World); 7] = [
        (Some(r#"{"phase": "READY"}"#), world(2.0, false)),
        (Some(r#"{"phase": "PLAY"}"#), world(2.0, false)),
        (None, world(0.4, false)),
        (None, world(0.4, true)),
        (Some(r#"{"phase": "PLAY", "secondary": "throwInOpponent"}"#), world(0.4, true)),
        (Some("garbage"), world(0.4, true)),
        (Some(r#"{"phase": "STOP"}"#), world(0.4, true)),
    ];
    for (msg, w) in script {
        if let Some(line) = msg {
            agent.on_message(&parse_controller_line(line));
        }
        let action = agent.step(&w);
        let shown = match &action {
            Action::Walk(c) => format!("walk vx {:.2} vy {:.2} omega {:.2}", c.vx, c.vy, c.omega),
            Action::Kick(p) => format!("kick strength {:.1}", p.strength),
            Action::Idle => "idle".into(),
        };
        println!("{:?}/{:?} -> {:?}: {shown}", agent.game.phase, agent.game.secondary, agent.behavior);
    }
    for w in &agent.warnings {
        println!("warning: {w}");
    }
}
