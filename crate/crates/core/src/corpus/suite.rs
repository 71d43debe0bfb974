use super::fixtures::{load_fixture, Expectation, Fixture, FixtureId};
use crate::axioms::{self, recheck_witness, Caps};
use crate::error::Result;
use crate::mechanisms::{run, StrategyProfile};
use crate::model::Allocation;
use crate::oracles::{ef1_continuations, offline_exists};

/// Result of checking one expectation against one mechanism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub fixture: FixtureId,
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

pub fn evaluate(fixture: &Fixture, caps: &Caps) -> Result<Vec<Outcome>> {
    let problem = &fixture.problem;
    let mut outcomes = Vec::new();
    let mut record = |claim: String, passed: bool, detail: String| {
        outcomes.push(Outcome {
            fixture: fixture.id,
            claim,
            passed,
            detail,
        })
    };
    for expectation in &fixture.expectations {
        match expectation {
            Expectation::Axiom {
                scope,
                axiom,
                holds,
                note,
            } => {
                for mechanism in scope.mechanisms(problem.agents()) {
                    let verdict = axioms::check(problem, &mechanism, *axiom, &StrategyProfile::sincere(), caps)?;
                    let distribution =
                        (!axiom.is_incentive()).then(|| run(problem, &mechanism, &StrategyProfile::sincere()));
                    let rechecked = recheck_witness(problem, Some(&mechanism), distribution.as_ref(), &verdict)?;
                    let verb = if *holds { "holds" } else { "fails" };
                    let mut detail = format!("{note}; verdict {}", if verdict.holds { "holds" } else { "fails" });
                    if !rechecked {
                        detail.push_str("; witness did not re-check");
                    }
                    record(
                        format!("{mechanism}: {axiom} {verb}"),
                        verdict.holds == *holds && rechecked,
                        detail,
                    );
                }
            }
            Expectation::OfflineExists { property, exists, note } => {
                let found = offline_exists(problem, *property, caps.enumeration)?;
                let detail = match &found {
                    Some(allocation) => format!("{note}; first: {}", problem.describe_allocation(allocation)),
                    None => format!("{note}; none found"),
                };
                let verb = if *exists { "exists" } else { "does not exist" };
                record(
                    format!("offline {property} allocation {verb}"),
                    found.is_some() == *exists,
                    detail,
                );
            }
            Expectation::NoEf1Continuation { first_owner, note } => {
                let prefix = Allocation::empty(problem.agents()).give(0, *first_owner);
                let continuations = ef1_continuations(problem, &prefix)?;
                let dead: Vec<String> = continuations
                    .dead_ends
                    .iter()
                    .map(|a| problem.describe_allocation(a))
                    .collect();
                record(
                    format!("no EF1 continuation after o1 goes to agent {}", first_owner + 1),
                    continuations.ef1_completions.is_empty(),
                    format!("{note}; dead ends: {}", dead.join(" ")),
                );
            }
        }
    }
    Ok(outcomes)
}

pub fn evaluate_all(caps: &Caps) -> Result<Vec<Outcome>> {
    let mut all = Vec::new();
    for id in FixtureId::ALL {
        all.extend(evaluate(&load_fixture(id), caps)?);
    }
    Ok(all)
}
