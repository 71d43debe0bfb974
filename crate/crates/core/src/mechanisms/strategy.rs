use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::Allocation;
use crate::rational::Rational;

/// One insincere declaration: at the decision node given by `node` (the
/// allocation of the items so far, so the node's round is `node.round()`),
/// `agent` declares `declared` instead of its true marginal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Deviation {
    pub agent: usize,
    pub node: Allocation,
    pub declared: Rational,
}

/// Declared marginals per agent and decision node. Nodes without an entry
/// are played sincerely.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StrategyProfile {
    overrides: BTreeMap<(usize, Allocation), Rational>,
}

impl StrategyProfile {
    pub fn sincere() -> Self {
        StrategyProfile::default()
    }

    pub fn from_deviations<I: IntoIterator<Item = Deviation>>(deviations: I) -> Result<Self> {
        let mut profile = StrategyProfile::sincere();
        for deviation in deviations {
            profile.set(deviation.agent, deviation.node, deviation.declared)?;
        }
        Ok(profile)
    }

    pub fn set(&mut self, agent: usize, node: Allocation, declared: Rational) -> Result<()> {
        if declared < Rational::zero() {
            return Err(Error::Precondition("declared marginals must be nonnegative".into()));
        }
        self.overrides.insert((agent, node), declared);
        Ok(())
    }

    pub fn with(mut self, agent: usize, node: Allocation, declared: Rational) -> Result<Self> {
        self.set(agent, node, declared)?;
        Ok(self)
    }

    /// The bid `agent` places at `node`, falling back to the sincere value.
    pub fn declared(&self, agent: usize, node: &Allocation, sincere: Rational) -> Rational {
        // BTreeMap lookup on a borrowed tuple would need an owned key.
        match self.overrides.get(&(agent, node.clone())) {
            Some(value) => value.clone(),
            None => sincere,
        }
    }

    pub fn is_sincere(&self) -> bool {
        self.overrides.is_empty()
    }

    pub fn deviations(&self) -> impl Iterator<Item = Deviation> + '_ {
        self.overrides.iter().map(|((agent, node), declared)| Deviation {
            agent: *agent,
            node: node.clone(),
            declared: declared.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.overrides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.overrides.is_empty()
    }
}
