use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::mechanism::{Mechanism, MechanismState};
use super::strategy::StrategyProfile;
use crate::model::{Allocation, AllocationDistribution, Problem};
use crate::rational::Rational;

/// Allocation plus the declared utilities accumulated along the way. Two
/// paths reaching the same node state behave identically afterwards.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeState {
    pub allocation: Allocation,
    pub declared: Vec<Rational>,
}

/// Every round's frontier: `frontiers[j]` holds the states reached after
/// `j` items with their probabilities.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub frontiers: Vec<BTreeMap<NodeState, Rational>>,
}

impl Expansion {
    pub fn final_distribution(&self) -> AllocationDistribution {
        let round = self.frontiers.len() - 1;
        let mut support: BTreeMap<Allocation, Rational> = BTreeMap::new();
        for (state, probability) in &self.frontiers[round] {
            *support.entry(state.allocation.clone()).or_insert_with(Rational::zero) += probability;
        }
        AllocationDistribution::from_parts_unchecked(round, support)
    }

    /// Distribution over allocations of the first `j` items.
    pub fn distribution_at(&self, j: usize) -> AllocationDistribution {
        let mut support: BTreeMap<Allocation, Rational> = BTreeMap::new();
        for (state, probability) in &self.frontiers[j] {
            *support.entry(state.allocation.clone()).or_insert_with(Rational::zero) += probability;
        }
        AllocationDistribution::from_parts_unchecked(j, support)
    }
}

/// Bids of every agent at a node under `strategy`.
pub(crate) fn bids_at(
    problem: &Problem,
    strategy: &StrategyProfile,
    allocation: &Allocation,
    item: usize,
) -> Vec<Rational> {
    (0..problem.agents())
        .map(|agent| {
            let sincere = problem
                .marginal(agent, allocation.bundle(agent), item)
                .expect("node allocations never hold the arriving item");
            strategy.declared(agent, allocation, sincere)
        })
        .collect()
}

/// Expands the mechanism's decision tree round by round, merging identical
/// node states by summing their probabilities.
pub fn expand(problem: &Problem, mechanism: &Mechanism, strategy: &StrategyProfile) -> Expansion {
    let agents = problem.agents();
    let initial = NodeState {
        allocation: Allocation::empty(agents),
        declared: vec![Rational::zero(); agents],
    };
    let mut frontiers = vec![BTreeMap::from([(initial, Rational::one())])];
    for item in 0..problem.items() {
        let mut next: BTreeMap<NodeState, Rational> = BTreeMap::new();
        for (state, probability) in &frontiers[item] {
            let bids = bids_at(problem, strategy, &state.allocation, item);
            let view = MechanismState {
                round: item,
                allocation: state.allocation.clone(),
                declared: state.declared.clone(),
            };
            let shares = mechanism.round_probabilities(&view, &bids);
            for (agent, share) in shares.iter().enumerate() {
                if share.is_zero() {
                    continue;
                }
                let mut declared = state.declared.clone();
                declared[agent] += &bids[agent];
                let child = NodeState {
                    allocation: state.allocation.give(item, agent),
                    declared,
                };
                *next.entry(child).or_insert_with(Rational::zero) += probability * share;
            }
        }
        frontiers.push(next);
    }
    Expansion { frontiers }
}

/// Exact distribution `Δ_m` over final allocations.
pub fn run(problem: &Problem, mechanism: &Mechanism, strategy: &StrategyProfile) -> AllocationDistribution {
    expand(problem, mechanism, strategy).final_distribution()
}

/// `ū[i][k] = Σ_π p(π) · u_i(π_k)`.
pub fn expected_utilities(problem: &Problem, distribution: &AllocationDistribution) -> Vec<Vec<Rational>> {
    let agents = problem.agents();
    let mut matrix = vec![vec![Rational::zero(); agents]; agents];
    for (allocation, probability) in distribution.iter() {
        for (i, row) in matrix.iter_mut().enumerate() {
            let u = problem.utility(i);
            for (k, cell) in row.iter_mut().enumerate() {
                *cell += probability * u.value(allocation.bundle(k));
            }
        }
    }
    matrix
}
