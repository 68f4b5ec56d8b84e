use serde::{Deserialize, Serialize};

use super::behavior::{behavior_step, Action, BehaviorState, World};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GamePhase {
    Initial,
    Ready,
    Set,
    Play,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Secondary {
    #[default]
    None,
    ThrowInOpponent,
    ThrowInOwn,
    PenaltyKick,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState {
    pub phase: GamePhase,
    pub secondary: Secondary,
}

impl Default for GameState {
    fn default() -> Self {
        GameState {
            phase: GamePhase::Initial,
            secondary: Secondary::None,
        }
    }
}

impl GameState {
    /// Whether the robot may act on the ball.
    pub fn allows_play(&self) -> bool {
        self.phase == GamePhase::Play && self.secondary != Secondary::ThrowInOpponent
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMsg {
    phase: GamePhase,
    #[serde(default)]
    secondary: Option<Secondary>,
}

/// One game-controller message.
#[derive(Debug, Clone, PartialEq)]
pub enum ControllerMsg {
    Set { phase: GamePhase, secondary: Option<Secondary> },
    Unknown(String),
}

/// Parses one JSON line such as `{"phase": "PLAY"}`. Anything unrecognised is kept as
/// [`ControllerMsg::Unknown`] so that the state machine can ignore it.
pub fn parse_controller_line(line: &str) -> ControllerMsg {
    match serde_json::from_str::<RawMsg>(line) {
        Ok(m) => ControllerMsg::Set {
            phase: m.phase,
            secondary: m.secondary,
        },
        Err(_) => ControllerMsg::Unknown(line.trim().to_string()),
    }
}

/// Returns the new state and a warning for messages that were ignored.
pub fn game_fsm_step(g: GameState, msg: &ControllerMsg) -> (GameState, Option<String>) {
    match msg {
        ControllerMsg::Set { phase, secondary } => (
            GameState {
                phase: *phase,
                secondary: secondary.unwrap_or(Secondary::None),
            },
            None,
        ),
        ControllerMsg::Unknown(raw) => (g, Some(format!("ignored controller message: {raw}"))),
    }
}

/// Game state gating the behavior state machine.
#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub game: GameState,
    pub behavior: BehaviorState,
    pub warnings: Vec<String>,
}

impl Default for Agent {
    fn default() -> Self {
        Agent {
            game: GameState::default(),
            behavior: BehaviorState::Wait,
            warnings: Vec::new(),
        }
    }
}

impl Agent {
    pub fn on_message(&mut self, msg: &ControllerMsg) {
        let (g, warning) = game_fsm_step(self.game, msg);
        self.game = g;
        self.warnings.extend(warning);
    }

    /// Behavior output, suppressed to [`Action::Idle`] outside regular play.
    pub fn step(&mut self, world: &World) -> Action {
        if !self.game.allows_play() {
            self.behavior = BehaviorState::Wait;
            return Action::Idle;
        }
        let (b, action) = behavior_step(self.behavior, world);
        self.behavior = b;
        action
    }
}
