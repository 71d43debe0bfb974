use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input: bad JSON shape, unknown item, incomplete table.
    #[error("schema error: {0}")]
    Schema(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("utility of agent {agent} is not monotone: u({smaller}) = {smaller_value} > u({larger}) = {larger_value}")]
    NotMonotone {
        agent: usize,
        smaller: String,
        larger: String,
        smaller_value: String,
        larger_value: String,
    },
    /// An enumeration would exceed the configured size cap.
    #[error("capacity exceeded: {what} needs {needed} entries, cap is {cap}")]
    Capacity {
        what: &'static str,
        needed: u128,
        cap: u128,
    },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("unknown mechanism `{0}`")]
    UnknownMechanism(String),
    #[error("unsatisfiable domain request: {0}")]
    Unsatisfiable(String),
}
