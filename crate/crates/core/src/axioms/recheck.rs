//! Independent re-verification of failing verdicts.
//!
//! Each witness is checked straight from the definitions, without reusing
//! the search code that produced it.

use num_traits::{One, Signed, Zero};

use super::verdict::{Axiom, Verdict, Witness};
use crate::error::{Error, Result};
use crate::mechanisms::{run, Mechanism, StrategyProfile};
use crate::model::{Allocation, AllocationDistribution, ItemSet, Problem, UtilityFunction};
use crate::rational::Rational;

/// `Ok(true)` when a failing verdict's witness really refutes the axiom, or
/// when a passing verdict carries no witness. Manipulation witnesses need
/// the mechanism; distribution witnesses are checked against `distribution`
/// when one is given.
pub fn recheck_witness(
    problem: &Problem,
    mechanism: Option<&Mechanism>,
    distribution: Option<&AllocationDistribution>,
    verdict: &Verdict,
) -> Result<bool> {
    let Some(witness) = &verdict.witness else {
        return Ok(verdict.holds);
    };
    if verdict.holds {
        return Ok(false);
    }
    let in_support = |allocation: &Allocation| distribution.is_none_or(|d| d.probability(allocation).is_positive());
    match witness {
        Witness::Envy {
            allocation,
            envious,
            envied,
            own_value,
            envied_value,
            residuals,
        } => {
            let (i, k) = (*envious, *envied);
            if !in_support(allocation) || !full(problem, allocation) || i == k {
                return Ok(false);
            }
            let u = problem.utility(i);
            let own = u.value(allocation.bundle(i));
            let other = allocation.bundle(k);
            if own != own_value || u.value(other) != envied_value || own >= u.value(other) {
                return Ok(false);
            }
            let removable: Vec<usize> = match verdict.axiom {
                Axiom::Efp => return Ok(residuals.is_empty()),
                Axiom::Ef1 => other.items().collect(),
                Axiom::Efx => {
                    // only one remaining envy is needed, and it must be listed
                    return Ok(!residuals.is_empty()
                        && residuals.iter().all(|(o, r)| {
                            other.contains(*o)
                                && u.value(ItemSet::singleton(*o)).is_positive()
                                && *r == u.value(other.without(*o)) - own
                                && r.is_positive()
                        }));
                }
                _ => return Ok(false),
            };
            Ok(!removable.is_empty()
                && residuals.len() == removable.len()
                && removable
                    .iter()
                    .zip(residuals)
                    .all(|(o, (listed, r))| o == listed && *r == u.value(other.without(*o)) - own && r.is_positive()))
        }
        Witness::ExAnteEnvy {
            envious,
            envied,
            own_value,
            envied_value,
        } => {
            let Some(distribution) = distribution else {
                return Ok(own_value < envied_value);
            };
            let u = problem.utility(*envious);
            let mut own = Rational::zero();
            let mut other = Rational::zero();
            for (allocation, p) in distribution.iter() {
                own += p * u.value(allocation.bundle(*envious));
                other += p * u.value(allocation.bundle(*envied));
            }
            Ok(own == *own_value && other == *envied_value && own < other)
        }
        Witness::Dominated { allocation, dominating } => {
            if !in_support(allocation) || !full(problem, allocation) || !full(problem, dominating) {
                return Ok(false);
            }
            Ok(pareto_better(
                &values(problem, dominating),
                &values(problem, allocation),
            ))
        }
        Witness::ExAnteDominated {
            expected,
            dominating,
            mixture,
        } => {
            let total: Rational = mixture.iter().map(|(_, q)| q.clone()).sum();
            if !total.is_one() || mixture.iter().any(|(a, q)| !q.is_positive() || !full(problem, a)) {
                return Ok(false);
            }
            let mut mixed = vec![Rational::zero(); problem.agents()];
            for (allocation, q) in mixture {
                for (i, v) in values(problem, allocation).into_iter().enumerate() {
                    mixed[i] += q * v;
                }
            }
            if let Some(distribution) = distribution {
                let mut actual = vec![Rational::zero(); problem.agents()];
                for (allocation, p) in distribution.iter() {
                    for (i, v) in values(problem, allocation).into_iter().enumerate() {
                        actual[i] += p * v;
                    }
                }
                if actual != *expected {
                    return Ok(false);
                }
            }
            Ok(mixed == *dominating && pareto_better(&mixed, expected))
        }
        Witness::Manipulation {
            coalition,
            deviations,
            sincere_value,
            deviated_value,
        } => {
            let mechanism = need(mechanism)?;
            if coalition.is_empty() || deviations.iter().any(|d| !coalition.contains(&d.agent)) {
                return Ok(false);
            }
            let strategy = StrategyProfile::from_deviations(deviations.iter().cloned())?;
            let sincere = coalition_total(
                problem,
                &run(problem, mechanism, &StrategyProfile::sincere()),
                coalition,
            );
            let deviated = coalition_total(problem, &run(problem, mechanism, &strategy), coalition);
            Ok(sincere == *sincere_value && deviated == *deviated_value && deviated > sincere)
        }
        Witness::OnlineManipulation {
            agent,
            node,
            declared,
            sincere_value,
            deviated_value,
        } => {
            let mechanism = need(mechanism)?;
            // The horizon is the node's item: cut the problem there and replay.
            let horizon = node.round() + 1;
            if horizon > problem.items() {
                return Ok(false);
            }
            let truncated = truncate(problem, horizon)?;
            let strategy = StrategyProfile::sincere().with(*agent, node.clone(), declared.clone())?;
            let sincere = coalition_total(
                &truncated,
                &run(&truncated, mechanism, &StrategyProfile::sincere()),
                &[*agent],
            );
            let deviated = coalition_total(&truncated, &run(&truncated, mechanism, &strategy), &[*agent]);
            Ok(sincere == *sincere_value && deviated == *deviated_value && deviated > sincere)
        }
    }
}

fn need(mechanism: Option<&Mechanism>) -> Result<&Mechanism> {
    mechanism.ok_or_else(|| Error::Precondition("re-checking a manipulation needs the mechanism".into()))
}

fn full(problem: &Problem, allocation: &Allocation) -> bool {
    allocation.agents() == problem.agents() && allocation.covered() == ItemSet::prefix(problem.items())
}

fn values(problem: &Problem, allocation: &Allocation) -> Vec<Rational> {
    (0..problem.agents())
        .map(|i| problem.utility(i).value(allocation.bundle(i)).clone())
        .collect()
}

fn pareto_better(challenger: &[Rational], base: &[Rational]) -> bool {
    challenger.len() == base.len()
        && challenger.iter().zip(base).all(|(c, b)| c >= b)
        && challenger.iter().zip(base).any(|(c, b)| c > b)
}

fn coalition_total(problem: &Problem, distribution: &AllocationDistribution, coalition: &[usize]) -> Rational {
    distribution
        .iter()
        .map(|(allocation, p)| {
            coalition
                .iter()
                .map(|&i| p * problem.utility(i).value(allocation.bundle(i)))
                .sum::<Rational>()
        })
        .sum()
}

/// The same agents facing only the first `items` items.
fn truncate(problem: &Problem, items: usize) -> Result<Problem> {
    let utilities = problem
        .utilities()
        .iter()
        .map(|u| UtilityFunction::from_table(items, u.table()[..1 << items].to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Problem::new(problem.item_names()[..items].to_vec(), utilities)
}
