//! Reduced-order humanoid motion stack.

pub mod cli;
pub mod config;
pub mod error;
pub mod estimation;
pub mod fused_angles;
pub mod gait;
pub mod kick;
pub mod perception;
pub mod service;
pub mod sim;
pub mod skills;
pub mod stabilization;

pub use error::{Error, Result};
