//! Online fair division of indivisible items with monotone bundle utilities.
//!
//! Items arrive one at a time. At each round every agent declares a marginal
//! bid for the incoming item and a mechanism splits the probability of
//! receiving it. The [`mechanisms`] engine expands the full distribution over
//! final allocations in exact rational arithmetic, and [`axioms`] checks
//! strategy-proofness, envy-freeness and Pareto efficiency against it.

pub mod axioms;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod io;
pub mod mechanisms;
pub mod model;
pub mod oracles;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Rational;
