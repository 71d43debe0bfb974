use std::fmt;
use std::str::FromStr;

use super::enumerate::enumerate_allocations;
use crate::axioms::{is_ef, is_ef1, is_efx, pareto_dominator};
use crate::error::{Error, Result};
use crate::model::{Allocation, Problem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OfflineProperty {
    Ef,
    Ef1,
    Efx,
    Pep,
}

impl fmt::Display for OfflineProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OfflineProperty::Ef => "ef",
            OfflineProperty::Ef1 => "ef1",
            OfflineProperty::Efx => "efx",
            OfflineProperty::Pep => "pep",
        })
    }
}

impl FromStr for OfflineProperty {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "ef" => Ok(OfflineProperty::Ef),
            "ef1" => Ok(OfflineProperty::Ef1),
            "efx" => Ok(OfflineProperty::Efx),
            "pep" | "pe" => Ok(OfflineProperty::Pep),
            _ => Err(Error::Schema(format!("unknown offline property `{text}`"))),
        }
    }
}

/// First full allocation, in owner-vector order, that has the property.
pub fn offline_exists(problem: &Problem, property: OfflineProperty, cap: u128) -> Result<Option<Allocation>> {
    let all = enumerate_allocations(problem.agents(), problem.items(), cap)?;
    let found = all.iter().find(|allocation| match property {
        OfflineProperty::Ef => is_ef(problem, allocation),
        OfflineProperty::Ef1 => is_ef1(problem, allocation),
        OfflineProperty::Efx => is_efx(problem, allocation),
        OfflineProperty::Pep => pareto_dominator(problem, allocation, &all).is_none(),
    });
    Ok(found.cloned())
}

/// Online continuations of a partial allocation that keep every
/// intermediate allocation EF1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Continuations {
    /// Complete allocations reached with EF1 at every round.
    pub ef1_completions: Vec<Allocation>,
    /// First non-EF1 allocation on each abandoned branch.
    pub dead_ends: Vec<Allocation>,
}

pub fn ef1_continuations(problem: &Problem, prefix: &Allocation) -> Result<Continuations> {
    let round = prefix.round();
    Allocation::new(prefix.bundles().to_vec(), round)?;
    if prefix.agents() != problem.agents() {
        return Err(Error::Precondition(
            "prefix agent count differs from the problem".into(),
        ));
    }
    let mut found = Continuations::default();
    let mut stack = vec![prefix.clone()];
    while let Some(partial) = stack.pop() {
        if !is_ef1(problem, &partial) {
            found.dead_ends.push(partial);
            continue;
        }
        let next = partial.round();
        if next == problem.items() {
            found.ef1_completions.push(partial);
            continue;
        }
        for agent in (0..problem.agents()).rev() {
            stack.push(partial.give(next, agent));
        }
    }
    Ok(found)
}
