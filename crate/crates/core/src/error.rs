use thiserror::Error;

/// Errors produced across the motion stack.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("target out of reach: distance {distance:.6} m exceeds reach {reach:.6} m")]
    Unreachable { distance: f64, reach: f64 },

    #[error("joint {joint} at {value:.6} rad is outside its limits")]
    JointLimit { joint: &'static str, value: f64 },

    #[error("invalid pendulum spec: {0}")]
    InvalidSpec(String),

    #[error("config error at {pointer}: {message}")]
    Config { pointer: String, message: String },

    #[error("track fit failed: {0}")]
    Fit(String),

    #[error("ball never reaches the trigger region")]
    NeverArrives,

    #[error("simulation aborted: {0}")]
    Aborted(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
