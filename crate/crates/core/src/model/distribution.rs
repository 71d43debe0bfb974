use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::allocation::Allocation;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Distribution `Δ_j` over allocations of the first `j` items.
///
/// The support only holds allocations with strictly positive probability and
/// the probabilities sum to exactly one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllocationDistribution {
    round: usize,
    support: BTreeMap<Allocation, Rational>,
}

impl AllocationDistribution {
    pub fn new(round: usize, support: BTreeMap<Allocation, Rational>) -> Result<Self> {
        let mut total = Rational::zero();
        let mut agents = None;
        for (allocation, probability) in &support {
            if *probability <= Rational::zero() || *probability > Rational::one() {
                return Err(Error::Schema(format!(
                    "probability {} is outside (0, 1]",
                    rational::format(probability)
                )));
            }
            Allocation::new(allocation.bundles().to_vec(), round)?;
            if *agents.get_or_insert(allocation.agents()) != allocation.agents() {
                return Err(Error::Schema("support allocations disagree on the agent count".into()));
            }
            total += probability;
        }
        if !total.is_one() {
            return Err(Error::Schema(format!(
                "probabilities sum to {}, not 1",
                rational::format(&total)
            )));
        }
        Ok(AllocationDistribution { round, support })
    }

    /// Point mass on one allocation.
    pub fn point(allocation: Allocation) -> Self {
        let round = allocation.round();
        AllocationDistribution {
            round,
            support: BTreeMap::from([(allocation, Rational::one())]),
        }
    }

    pub(crate) fn from_parts_unchecked(round: usize, support: BTreeMap<Allocation, Rational>) -> Self {
        AllocationDistribution { round, support }
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn agents(&self) -> usize {
        self.support.keys().next().map_or(0, Allocation::agents)
    }

    pub fn probability(&self, allocation: &Allocation) -> Rational {
        self.support.get(allocation).cloned().unwrap_or_else(Rational::zero)
    }

    /// Support in ascending allocation order.
    pub fn iter(&self) -> impl Iterator<Item = (&Allocation, &Rational)> {
        self.support.iter()
    }

    pub fn allocations(&self) -> impl Iterator<Item = &Allocation> {
        self.support.keys()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn total(&self) -> Rational {
        self.support.values().sum()
    }
}
