//! Brute-force offline oracles and the exact linear-programming kernel.

mod enumerate;
mod lp;
mod mixture;
mod offline;

pub use enumerate::{allocation_count, enumerate_allocations};
pub use lp::{lp_solve, LpConstraint, LpOutcome, LpProblem, Relation};
pub use mixture::mixture_dominance_oracle;
pub use offline::{ef1_continuations, offline_exists, Continuations, OfflineProperty};
