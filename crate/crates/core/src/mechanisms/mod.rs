//! Online mechanisms and the exact execution engine.

mod engine;
mod mechanism;
mod strategy;

pub use engine::{expand, expected_utilities, run, Expansion, NodeState};
pub use mechanism::{BidDependence, Mechanism, MechanismState};
pub use strategy::{Deviation, StrategyProfile};
