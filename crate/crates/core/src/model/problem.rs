use super::allocation::Allocation;
use super::item_set::{ItemSet, MAX_ITEMS};
use super::utility::{describe, MonotoneViolation, UtilityFunction};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Agents `0..n`, items `0..m` arriving in index order, one validated
/// monotone utility per agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    items: Vec<String>,
    utilities: Vec<UtilityFunction>,
}

impl Problem {
    pub fn new(items: Vec<String>, utilities: Vec<UtilityFunction>) -> Result<Self> {
        if utilities.is_empty() {
            return Err(Error::Schema("a problem needs at least one agent".into()));
        }
        if items.is_empty() || items.len() > MAX_ITEMS {
            return Err(Error::Schema(format!(
                "item count must be between 1 and {MAX_ITEMS}, got {}",
                items.len()
            )));
        }
        for (j, name) in items.iter().enumerate() {
            if items[..j].contains(name) {
                return Err(Error::Schema(format!("item `{name}` declared twice")));
            }
        }
        for (agent, u) in utilities.iter().enumerate() {
            if u.item_count() != items.len() {
                return Err(Error::Schema(format!(
                    "utility of agent {agent} covers {} items, problem has {}",
                    u.item_count(),
                    items.len()
                )));
            }
            match u.validate_monotone() {
                Ok(()) => {}
                Err(MonotoneViolation::EmptyNotZero(value)) => {
                    return Err(Error::Schema(format!(
                        "utility of agent {agent} gives the empty bundle value {}",
                        rational::format(&value)
                    )))
                }
                Err(MonotoneViolation::Decreasing { smaller, larger }) => {
                    return Err(Error::NotMonotone {
                        agent,
                        smaller: describe(smaller, &items),
                        larger: describe(larger, &items),
                        smaller_value: rational::format(u.value(smaller)),
                        larger_value: rational::format(u.value(larger)),
                    })
                }
            }
        }
        Ok(Problem { items, utilities })
    }

    /// Items named `o1..om`.
    pub fn with_default_names(utilities: Vec<UtilityFunction>) -> Result<Self> {
        let m = utilities.first().map_or(0, UtilityFunction::item_count);
        Problem::new(default_item_names(m), utilities)
    }

    /// Every agent gets a copy of the same utility.
    pub fn identical(n: usize, utility: UtilityFunction) -> Result<Self> {
        Problem::with_default_names(vec![utility; n])
    }

    pub fn agents(&self) -> usize {
        self.utilities.len()
    }

    pub fn items(&self) -> usize {
        self.items.len()
    }

    pub fn item_names(&self) -> &[String] {
        &self.items
    }

    pub fn item_index(&self, name: &str) -> Option<usize> {
        self.items.iter().position(|item| item == name)
    }

    pub fn utility(&self, agent: usize) -> &UtilityFunction {
        &self.utilities[agent]
    }

    pub fn utilities(&self) -> &[UtilityFunction] {
        &self.utilities
    }

    /// Agent's true marginal for `item` given the bundle it currently holds.
    pub fn marginal(&self, agent: usize, bundle: ItemSet, item: usize) -> Result<Rational> {
        self.utilities[agent].marginal(bundle, item)
    }

    /// `u_agent(π_owner)`.
    pub fn bundle_utility_of(&self, agent: usize, allocation: &Allocation, owner: usize) -> Result<Rational> {
        if owner >= allocation.agents() || agent >= self.agents() {
            return Err(Error::Precondition(format!(
                "agent index out of range: agent {agent}, owner {owner}, {} agents",
                self.agents()
            )));
        }
        Ok(self.utilities[agent].value(allocation.bundle(owner)).clone())
    }

    /// `(u_1(π_1), …, u_n(π_n))`.
    pub fn profile(&self, allocation: &Allocation) -> Vec<Rational> {
        (0..self.agents())
            .map(|i| self.utilities[i].value(allocation.bundle(i)).clone())
            .collect()
    }

    pub fn describe_set(&self, bundle: ItemSet) -> String {
        describe(bundle, &self.items)
    }

    pub fn describe_allocation(&self, allocation: &Allocation) -> String {
        let bundles: Vec<String> = allocation.bundles().iter().map(|b| self.describe_set(*b)).collect();
        format!("({})", bundles.join(","))
    }
}

pub(crate) fn default_item_names(m: usize) -> Vec<String> {
    (1..=m).map(|j| format!("o{j}")).collect()
}
