use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Foot {
    Left,
    Right,
}

impl Foot {
    pub fn other(self) -> Foot {
        match self {
            Foot::Left => Foot::Right,
            Foot::Right => Foot::Left,
        }
    }

    /// +1 for the left leg, -1 for the right leg (lateral sign in the trunk frame).
    pub fn sign(self) -> f64 {
        match self {
            Foot::Left => 1.0,
            Foot::Right => -1.0,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Foot::Left => "L",
            Foot::Right => "R",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportState {
    pub support: Foot,
    /// Share of the support carried by the left leg, in [0, 1].
    pub blend: f64,
}

impl SupportState {
    pub fn new(support: Foot) -> Self {
        let blend = match support {
            Foot::Left => 1.0,
            Foot::Right => 0.0,
        };
        SupportState { support, blend }
    }
}

/// Lower foot is the supporting one, with a height hysteresis of `margin` on exchanges.
pub fn support_update(prev: SupportState, left_height: f64, right_height: f64, margin: f64) -> SupportState {
    let (current, candidate) = match prev.support {
        Foot::Left => (left_height, right_height),
        Foot::Right => (right_height, left_height),
    };
    let support = if candidate < current - margin {
        prev.support.other()
    } else {
        prev.support
    };

    let diff = right_height - left_height;
    let blend = if margin > 0.0 {
        (0.5 + diff / (4.0 * margin)).clamp(0.0, 1.0)
    } else if diff > 0.0 {
        1.0
    } else if diff < 0.0 {
        0.0
    } else {
        0.5
    };
    SupportState { support, blend }
}
