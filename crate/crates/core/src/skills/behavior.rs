use serde::{Deserialize, Serialize};

use crate::gait::GaitCommand;
use crate::kick::KickProfile;

/// Ball distance below which the robot stops approaching and lines up, m.
pub const NEAR_BALL: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BehaviorState {
    SearchBall,
    GoToBall,
    Align,
    Kick,
    AvoidObstacle,
    Wait,
}

impl BehaviorState {
    pub const ALL: [BehaviorState; 6] = [
        BehaviorState::SearchBall,
        BehaviorState::GoToBall,
        BehaviorState::Align,
        BehaviorState::Kick,
        BehaviorState::AvoidObstacle,
        BehaviorState::Wait,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct World {
    pub ball_visible: bool,
    pub ball_dist: f64,
    pub obstacle_ahead: bool,
    pub aligned: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    Walk(GaitCommand),
    Kick(KickProfile),
    Idle,
}

/// Transition table. An obstacle preempts everything except a kick in progress.
pub fn behavior_step(b: BehaviorState, world: &World) -> (BehaviorState, Action) {
    if world.obstacle_ahead && b != BehaviorState::Kick {
        return (BehaviorState::AvoidObstacle, Action::Walk(GaitCommand::new(0.0, 0.6, 0.0)));
    }
    if !world.ball_visible {
        return (BehaviorState::SearchBall, Action::Walk(GaitCommand::new(0.0, 0.0, 0.5)));
    }
    if world.ball_dist > NEAR_BALL {
        let vx = (world.ball_dist - NEAR_BALL).min(1.0);
        return (BehaviorState::GoToBall, Action::Walk(GaitCommand::new(vx, 0.0, 0.0)));
    }
    if !world.aligned {
        return (BehaviorState::Align, Action::Walk(GaitCommand::new(0.0, 0.2, -0.3)));
    }
    (BehaviorState::Kick, Action::Kick(KickProfile::default()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn world(ball_visible: bool, ball_dist: f64, obstacle_ahead: bool, aligned: bool) -> World {
        World {
            ball_visible,
            ball_dist,
            obstacle_ahead,
            aligned,
        }
    }

    #[test]
    fn lost_ball_searches_by_turning() {
        let (s, a) = behavior_step(BehaviorState::GoToBall, &world(false, 0.0, false, false));
        assert_eq!(s, BehaviorState::SearchBall);
        match a {
            Action::Walk(c) => assert!(c.omega != 0.0 && c.vx == 0.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn near_and_aligned_kicks() {
        let (s, a) = behavior_step(BehaviorState::Align, &world(true, 0.3, false, true));
        assert_eq!(s, BehaviorState::Kick);
        assert_eq!(a, Action::Kick(KickProfile::default()));
    }

    #[test]
    fn far_ball_is_approached() {
        let (s, _) = behavior_step(BehaviorState::SearchBall, &world(true, 2.0, false, true));
        assert_eq!(s, BehaviorState::GoToBall);
        let (s, _) = behavior_step(BehaviorState::GoToBall, &world(true, 0.3, false, false));
        assert_eq!(s, BehaviorState::Align);
    }

    #[test]
    fn table_is_total_and_obstacles_preempt() {
        let dists = [0.0, 0.3, NEAR_BALL, 0.6, 5.0];
        for b in BehaviorState::ALL {
            for visible in [false, true] {
                for obstacle in [false, true] {
                    for aligned in [false, true] {
                        for d in dists {
                            let w = world(visible, d, obstacle, aligned);
                            let (s1, a1) = behavior_step(b, &w);
                            let (s2, a2) = behavior_step(b, &w);
                            assert_eq!((s1, &a1), (s2, &a2));
                            if obstacle && b != BehaviorState::Kick {
                                assert_eq!(s1, BehaviorState::AvoidObstacle);
                            }
                            if obstacle && b == BehaviorState::Kick {
                                assert_ne!(s1, BehaviorState::AvoidObstacle);
                            }
                            assert_eq!(matches!(a1, Action::Kick(_)), s1 == BehaviorState::Kick);
                        }
                    }
                }
            }
        }
    }
}
