//! Named instances with their expected verdicts, plus seeded random problems.

mod fixtures;
mod random;
mod suite;

pub use fixtures::{fixture_problem, load_fixture, two_agents_one_item, Expectation, Fixture, FixtureId, Scope};
pub use random::generate_random;
pub use suite::{evaluate, evaluate_all, Outcome};
