//! Exact domain model: item sets, bundle utilities, problems, allocations and
//! allocation distributions.

mod allocation;
mod distribution;
mod domain;
mod item_set;
mod problem;
mod utility;

pub use allocation::Allocation;
pub use distribution::AllocationDistribution;
pub use domain::{classify, DomainFlags};
pub use item_set::{ItemSet, MAX_ITEMS};
pub use problem::Problem;
pub use utility::{MonotoneViolation, UtilityFunction};
