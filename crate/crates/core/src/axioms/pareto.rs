use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::verdict::{Axiom, Verdict, Witness};
use super::Caps;
use crate::error::Result;
use crate::mechanisms::expected_utilities;
use crate::model::{Allocation, AllocationDistribution, Problem};
use crate::oracles::{enumerate_allocations, lp_solve, LpOutcome, LpProblem, Relation};
use crate::rational::Rational;

/// First allocation in `candidates` that Pareto dominates `allocation`.
pub fn pareto_dominator(problem: &Problem, allocation: &Allocation, candidates: &[Allocation]) -> Option<Allocation> {
    let base = problem.profile(allocation);
    candidates
        .iter()
        .find(|candidate| dominates(&problem.profile(candidate), &base))
        .cloned()
}

fn dominates(challenger: &[Rational], base: &[Rational]) -> bool {
    challenger.iter().zip(base).all(|(c, b)| c >= b) && challenger.iter().zip(base).any(|(c, b)| c > b)
}

pub fn check_pep(problem: &Problem, distribution: &AllocationDistribution, caps: &Caps) -> Result<Verdict> {
    let all = enumerate_allocations(problem.agents(), problem.items(), caps.enumeration)?;
    for allocation in distribution.allocations() {
        if let Some(dominating) = pareto_dominator(problem, allocation, &all) {
            return Ok(Verdict::fails(
                Axiom::Pep,
                Witness::Dominated {
                    allocation: allocation.clone(),
                    dominating,
                },
            ));
        }
    }
    Ok(Verdict::holds(Axiom::Pep))
}

/// Optimum of the ex-ante dominance program for an expected profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExAnteSlack {
    /// `max Σ_i (Σ_π q(π)·u_i(π_i) − expected_i)`; zero iff nothing dominates.
    pub slack: Rational,
    /// Maximizing mixture over allocations, positive weights only.
    pub mixture: Vec<(Allocation, Rational)>,
    /// Expected profile of the mixture.
    pub profile: Vec<Rational>,
}

/// Solves: `q ≥ 0`, `Σ q = 1`, `Σ_π q(π)·u_i(π_i) ≥ expected_i` for all `i`,
/// maximizing the total slack. One variable per distinct utility profile.
pub fn ex_ante_slack(problem: &Problem, expected: &[Rational], caps: &Caps) -> Result<ExAnteSlack> {
    let all = enumerate_allocations(problem.agents(), problem.items(), caps.enumeration)?;
    let mut profiles: BTreeMap<Vec<Rational>, Allocation> = BTreeMap::new();
    for allocation in all {
        profiles.entry(problem.profile(&allocation)).or_insert(allocation);
    }
    // A weakly dominated profile never helps: shifting its weight to a
    // dominating profile raises every agent's sum. Keep the frontier only.
    let all_profiles: Vec<(Vec<Rational>, Allocation)> = profiles.into_iter().collect();
    let profiles: Vec<(Vec<Rational>, Allocation)> = all_profiles
        .iter()
        .filter(|(p, _)| !all_profiles.iter().any(|(q, _)| dominates(q, p)))
        .cloned()
        .collect();
    let agents = problem.agents();
    let objective = profiles.iter().map(|(p, _)| p.iter().sum()).collect();
    let mut lp = LpProblem::new(profiles.len(), objective);
    lp.constrain(
        vec![Rational::from_integer(1.into()); profiles.len()],
        Relation::Eq,
        Rational::from_integer(1.into()),
    );
    for i in 0..agents {
        lp.constrain(
            profiles.iter().map(|(p, _)| p[i].clone()).collect(),
            Relation::GreaterEq,
            expected[i].clone(),
        );
    }
    let LpOutcome::Optimal { value, assignment } = lp_solve(&lp)? else {
        // q = the distribution itself is feasible and the region is bounded
        unreachable!("ex-ante dominance program is feasible and bounded");
    };
    let slack = value - expected.iter().sum::<Rational>();
    let mut profile = vec![Rational::zero(); agents];
    let mut mixture = Vec::new();
    for ((p, allocation), weight) in profiles.iter().zip(&assignment) {
        if weight.is_positive() {
            for i in 0..agents {
                profile[i] += weight * &p[i];
            }
            mixture.push((allocation.clone(), weight.clone()));
        }
    }
    mixture.sort();
    Ok(ExAnteSlack {
        slack,
        mixture,
        profile,
    })
}

pub fn check_pea(problem: &Problem, distribution: &AllocationDistribution, caps: &Caps) -> Result<Verdict> {
    let matrix = expected_utilities(problem, distribution);
    let expected: Vec<Rational> = (0..problem.agents()).map(|i| matrix[i][i].clone()).collect();
    let optimum = ex_ante_slack(problem, &expected, caps)?;
    if optimum.slack.is_zero() {
        return Ok(Verdict::holds(Axiom::Pea));
    }
    Ok(Verdict::fails(
        Axiom::Pea,
        Witness::ExAnteDominated {
            expected,
            dominating: optimum.profile,
            mixture: optimum.mixture,
        },
    ))
}
