//! JSON formats: problems, distributions, deviation strategies and verdicts.
//!
//! Agents and rounds are numbered from 1 in every external format. Rational
//! values are written as `"p/q"` strings.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::axioms::{Verdict, Witness};
use crate::error::{Error, Result};
use crate::mechanisms::{Deviation, StrategyProfile};
use crate::model::{Allocation, AllocationDistribution, ItemSet, Problem, UtilityFunction};
use crate::rational::{self, Rational};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemDoc {
    agents: usize,
    items: Vec<String>,
    utilities: Vec<UtilityDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum UtilityDoc {
    Table { entries: Vec<EntryDoc> },
    Additive { values: Vec<Number> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    bundle: Vec<String>,
    value: Number,
}

/// Accepts `"3/4"`, `"0.75"` or a bare JSON integer.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Number {
    Text(String),
    Integer(i64),
}

impl Number {
    fn value(&self) -> Result<Rational> {
        match self {
            Number::Text(text) => rational::parse(text),
            Number::Integer(value) => Ok(rational::int(*value)),
        }
    }
}

fn schema(error: serde_json::Error) -> Error {
    Error::Schema(error.to_string())
}

pub fn parse_problem(text: &str) -> Result<Problem> {
    let doc: ProblemDoc = serde_json::from_str(text).map_err(schema)?;
    if doc.agents != doc.utilities.len() {
        return Err(Error::Schema(format!(
            "`agents` is {} but {} utilities are given",
            doc.agents,
            doc.utilities.len()
        )));
    }
    let utilities = doc
        .utilities
        .iter()
        .map(|u| {
            let utility = match u {
                UtilityDoc::Additive { values } => {
                    if values.len() != doc.items.len() {
                        return Err(Error::Schema(format!(
                            "additive utility lists {} values for {} items",
                            values.len(),
                            doc.items.len()
                        )));
                    }
                    UtilityFunction::additive(&values.iter().map(Number::value).collect::<Result<Vec<_>>>()?)?
                }
                UtilityDoc::Table { entries } => {
                    let parsed = entries
                        .iter()
                        .map(|entry| Ok((bundle_of(&doc.items, &entry.bundle)?, entry.value.value()?)))
                        .collect::<Result<Vec<_>>>()?;
                    UtilityFunction::from_entries(&doc.items, parsed)?
                }
            };
            if utility.table().iter().any(rational::is_negative) {
                return Err(Error::Schema("utilities must be nonnegative".into()));
            }
            Ok(utility)
        })
        .collect::<Result<Vec<_>>>()?;
    Problem::new(doc.items, utilities)
}

/// Additive utilities are written as per-item values, others as full tables.
pub fn problem_to_json(problem: &Problem) -> String {
    let names = problem.item_names();
    let utilities = problem
        .utilities()
        .iter()
        .map(|u| {
            if u.is_additive() {
                UtilityDoc::Additive {
                    values: (0..problem.items())
                        .map(|o| Number::Text(rational::format(u.item_value(o))))
                        .collect(),
                }
            } else {
                UtilityDoc::Table {
                    entries: ItemSet::all_subsets(problem.items())
                        .skip(1)
                        .map(|bundle| EntryDoc {
                            bundle: bundle.items().map(|o| names[o].clone()).collect(),
                            value: Number::Text(rational::format(u.value(bundle))),
                        })
                        .collect(),
                }
            }
        })
        .collect();
    let doc = ProblemDoc {
        agents: problem.agents(),
        items: names.to_vec(),
        utilities,
    };
    serde_json::to_string_pretty(&doc).expect("problem documents always serialize") + "\n"
}

fn bundle_of(items: &[String], names: &[String]) -> Result<ItemSet> {
    let mut bundle = ItemSet::EMPTY;
    for name in names {
        let index = items
            .iter()
            .position(|item| item == name)
            .ok_or_else(|| Error::Schema(format!("unknown item `{name}`")))?;
        if bundle.contains(index) {
            return Err(Error::Schema(format!("item `{name}` repeated in a bundle")));
        }
        bundle = bundle.with(index);
    }
    Ok(bundle)
}

fn allocation_of(problem: &Problem, bundles: &[Vec<String>], round: usize) -> Result<Allocation> {
    if bundles.len() != problem.agents() {
        return Err(Error::Schema(format!(
            "allocation has {} bundles for {} agents",
            bundles.len(),
            problem.agents()
        )));
    }
    let sets = bundles
        .iter()
        .map(|names| bundle_of(problem.item_names(), names))
        .collect::<Result<Vec<_>>>()?;
    Allocation::new(sets, round)
}

fn bundles_of(problem: &Problem, allocation: &Allocation) -> Vec<Vec<String>> {
    allocation
        .bundles()
        .iter()
        .map(|b| b.items().map(|o| problem.item_names()[o].clone()).collect())
        .collect()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistributionDoc {
    round: usize,
    support: Vec<SupportDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SupportDoc {
    allocation: Vec<Vec<String>>,
    probability: String,
}

fn distribution_doc(problem: &Problem, distribution: &AllocationDistribution) -> DistributionDoc {
    DistributionDoc {
        round: distribution.round(),
        support: distribution
            .iter()
            .map(|(allocation, p)| SupportDoc {
                allocation: bundles_of(problem, allocation),
                probability: rational::format(p),
            })
            .collect(),
    }
}

/// Canonical form: support in allocation order, one allocation per entry.
pub fn distribution_to_json(problem: &Problem, distribution: &AllocationDistribution) -> String {
    serde_json::to_string_pretty(&distribution_doc(problem, distribution)).expect("distributions always serialize")
        + "\n"
}

pub fn parse_distribution(problem: &Problem, text: &str) -> Result<AllocationDistribution> {
    let doc: DistributionDoc = serde_json::from_str(text).map_err(schema)?;
    let mut support = std::collections::BTreeMap::new();
    for entry in doc.support {
        let allocation = allocation_of(problem, &entry.allocation, doc.round)?;
        let probability = rational::parse(&entry.probability)?;
        if support.insert(allocation, probability).is_some() {
            return Err(Error::Schema("allocation listed twice in a distribution".into()));
        }
    }
    AllocationDistribution::new(doc.round, support)
}

/// Distribution plus the expected-utility matrix, as printed by `run --json`.
pub fn run_report_json(
    problem: &Problem,
    mechanism: &str,
    distribution: &AllocationDistribution,
    expected: &[Vec<Rational>],
) -> String {
    let value = json!({
        "mechanism": mechanism,
        "distribution": serde_json::to_value(distribution_doc(problem, distribution)).expect("serializable"),
        "expected_utilities": expected
            .iter()
            .map(|row| row.iter().map(rational::format).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    });
    serde_json::to_string_pretty(&value).expect("serializable") + "\n"
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeviationDoc {
    agent: usize,
    round: usize,
    allocation: Vec<Vec<String>>,
    declared: Number,
}

/// A JSON list of `{agent, round, allocation, declared}`; `allocation` holds
/// the items of the rounds before `round`.
pub fn parse_strategy(problem: &Problem, text: &str) -> Result<StrategyProfile> {
    let docs: Vec<DeviationDoc> = serde_json::from_str(text).map_err(schema)?;
    let mut deviations = Vec::new();
    for doc in docs {
        if doc.agent == 0 || doc.agent > problem.agents() {
            return Err(Error::Schema(format!(
                "agent {} out of range 1..={}",
                doc.agent,
                problem.agents()
            )));
        }
        if doc.round == 0 || doc.round > problem.items() {
            return Err(Error::Schema(format!(
                "round {} out of range 1..={}",
                doc.round,
                problem.items()
            )));
        }
        let node = allocation_of(problem, &doc.allocation, doc.round - 1)?;
        deviations.push(Deviation {
            agent: doc.agent - 1,
            node,
            declared: doc.declared.value()?,
        });
    }
    StrategyProfile::from_deviations(deviations)
}

pub fn deviation_json(problem: &Problem, deviation: &Deviation) -> Value {
    json!({
        "agent": deviation.agent + 1,
        "round": deviation.node.round() + 1,
        "allocation": bundles_of(problem, &deviation.node),
        "declared": rational::format(&deviation.declared),
    })
}

pub fn witness_json(problem: &Problem, witness: &Witness) -> Value {
    let name = |o: usize| problem.item_names()[o].clone();
    let f = rational::format;
    match witness {
        Witness::Envy {
            allocation,
            envious,
            envied,
            own_value,
            envied_value,
            residuals,
        } => json!({
            "kind": "envy",
            "allocation": bundles_of(problem, allocation),
            "envious": envious + 1,
            "envied": envied + 1,
            "own_value": f(own_value),
            "envied_value": f(envied_value),
            "residual_envy": residuals.iter().map(|(o, r)| json!({"removed": name(*o), "envy": f(r)})).collect::<Vec<_>>(),
        }),
        Witness::ExAnteEnvy {
            envious,
            envied,
            own_value,
            envied_value,
        } => json!({
            "kind": "ex-ante-envy",
            "envious": envious + 1,
            "envied": envied + 1,
            "own_value": f(own_value),
            "envied_value": f(envied_value),
        }),
        Witness::Dominated { allocation, dominating } => json!({
            "kind": "dominated",
            "allocation": bundles_of(problem, allocation),
            "dominating": bundles_of(problem, dominating),
        }),
        Witness::ExAnteDominated {
            expected,
            dominating,
            mixture,
        } => json!({
            "kind": "ex-ante-dominated",
            "expected": expected.iter().map(f).collect::<Vec<_>>(),
            "dominating": dominating.iter().map(f).collect::<Vec<_>>(),
            "mixture": mixture
                .iter()
                .map(|(a, q)| json!({"allocation": bundles_of(problem, a), "probability": f(q)}))
                .collect::<Vec<_>>(),
        }),
        Witness::Manipulation {
            coalition,
            deviations,
            sincere_value,
            deviated_value,
        } => json!({
            "kind": "manipulation",
            "coalition": coalition.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "deviations": deviations.iter().map(|d| deviation_json(problem, d)).collect::<Vec<_>>(),
            "sincere_value": f(sincere_value),
            "deviated_value": f(deviated_value),
        }),
        Witness::OnlineManipulation {
            agent,
            node,
            declared,
            sincere_value,
            deviated_value,
        } => json!({
            "kind": "online-manipulation",
            "agent": agent + 1,
            "round": node.round() + 1,
            "allocation": bundles_of(problem, node),
            "declared": f(declared),
            "sincere_value": f(sincere_value),
            "deviated_value": f(deviated_value),
        }),
    }
}

pub fn verdict_json(problem: &Problem, verdict: &Verdict) -> Value {
    json!({
        "axiom": verdict.axiom.name(),
        "holds": verdict.holds,
        "witness": verdict.witness.as_ref().map(|w| witness_json(problem, w)),
        "search_scope": verdict.search_scope,
    })
}

/// One-line human description of a witness, 1-based.
pub fn describe_witness(problem: &Problem, witness: &Witness) -> String {
    let f = rational::format;
    match witness {
        Witness::Envy {
            allocation,
            envious,
            envied,
            own_value,
            envied_value,
            residuals,
        } => {
            let mut text = format!(
                "in {} agent {} values its bundle at {} and agent {}'s at {}",
                problem.describe_allocation(allocation),
                envious + 1,
                f(own_value),
                envied + 1,
                f(envied_value)
            );
            if !residuals.is_empty() {
                let parts: Vec<String> = residuals
                    .iter()
                    .map(|(o, r)| format!("without {}: {}", problem.item_names()[*o], f(r)))
                    .collect();
                text.push_str(&format!("; envy left {}", parts.join(", ")));
            }
            text
        }
        Witness::ExAnteEnvy {
            envious,
            envied,
            own_value,
            envied_value,
        } => format!(
            "agent {} expects {} from its own bundle and {} from agent {}'s",
            envious + 1,
            f(own_value),
            f(envied_value),
            envied + 1
        ),
        Witness::Dominated { allocation, dominating } => format!(
            "{} is Pareto dominated by {}",
            problem.describe_allocation(allocation),
            problem.describe_allocation(dominating)
        ),
        Witness::ExAnteDominated {
            expected,
            dominating,
            mixture,
        } => {
            let parts: Vec<String> = mixture
                .iter()
                .map(|(a, q)| format!("{} {}", f(q), problem.describe_allocation(a)))
                .collect();
            format!(
                "expected profile ({}) is dominated by ({}) from mixture {}",
                expected.iter().map(f).collect::<Vec<_>>().join(","),
                dominating.iter().map(f).collect::<Vec<_>>().join(","),
                parts.join(" + ")
            )
        }
        Witness::Manipulation {
            coalition,
            deviations,
            sincere_value,
            deviated_value,
        } => {
            let who = match coalition.as_slice() {
                [agent] => format!("agent {} raises its expected utility", agent + 1),
                _ => {
                    let members: Vec<String> = coalition.iter().map(|i| (i + 1).to_string()).collect();
                    format!("agents {{{}}} raise their expected total", members.join(","))
                }
            };
            let moves: Vec<String> = deviations
                .iter()
                .map(|d| {
                    format!(
                        "agent {} bids {} for {} at {}",
                        d.agent + 1,
                        f(&d.declared),
                        problem.item_names()[d.node.round()],
                        problem.describe_allocation(&d.node)
                    )
                })
                .collect();
            format!(
                "{who} from {} to {}: {}",
                f(sincere_value),
                f(deviated_value),
                moves.join("; ")
            )
        }
        Witness::OnlineManipulation {
            agent,
            node,
            declared,
            sincere_value,
            deviated_value,
        } => format!(
            "agent {} bids {} for {} at {} and raises its round-{} expectation from {} to {}",
            agent + 1,
            f(declared),
            problem.item_names()[node.round()],
            problem.describe_allocation(node),
            node.round() + 1,
            f(sincere_value),
            f(deviated_value)
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{fixture_problem, FixtureId};
    use crate::mechanisms::{run, Mechanism};
    use crate::rational::int;

    #[test]
    fn parses_tables_and_additive_shorthand() {
        let text = r#"{"agents": 2, "items": ["a", "b"], "utilities": [
            {"kind": "table", "entries": [
                {"bundle": ["a"], "value": "1/2"}, {"bundle": ["b"], "value": 1},
                {"bundle": ["b", "a"], "value": "1.5"}]},
            {"kind": "additive", "values": ["2", 3]}]}"#;
        let problem = parse_problem(text).unwrap();
        assert_eq!(*problem.utility(0).value(ItemSet::prefix(2)), rational::ratio(3, 2));
        assert_eq!(*problem.utility(1).value(ItemSet::prefix(2)), int(5));
        assert_eq!(parse_problem(&problem_to_json(&problem)).unwrap(), problem);
    }

    #[test]
    fn schema_errors() {
        let missing = r#"{"agents": 1, "items": ["a", "b"], "utilities": [
            {"kind": "table", "entries": [{"bundle": ["a"], "value": "1"}, {"bundle": ["b"], "value": "1"}]}]}"#;
        let Err(Error::Schema(message)) = parse_problem(missing) else {
            panic!()
        };
        assert!(message.contains("{a,b}"), "{message}");
        let unknown = r#"{"agents": 1, "items": ["a"], "utilities": [{"kind": "table", "entries": [{"bundle": ["z"], "value": "1"}]}]}"#;
        assert!(matches!(parse_problem(unknown), Err(Error::Schema(_))));
        let count = r#"{"agents": 2, "items": ["a"], "utilities": [{"kind": "additive", "values": ["1"]}]}"#;
        assert!(matches!(parse_problem(count), Err(Error::Schema(_))));
        let decreasing = r#"{"agents": 1, "items": ["a", "b"], "utilities": [{"kind": "table", "entries": [
            {"bundle": ["a"], "value": "2"}, {"bundle": ["b"], "value": "0"}, {"bundle": ["a", "b"], "value": "1"}]}]}"#;
        assert!(matches!(parse_problem(decreasing), Err(Error::NotMonotone { .. })));
    }

    #[test]
    fn distribution_round_trip() {
        let problem = fixture_problem(FixtureId::T10);
        let distribution = run(&problem, &Mechanism::Like, &StrategyProfile::sincere());
        let text = distribution_to_json(&problem, &distribution);
        let parsed = parse_distribution(&problem, &text).unwrap();
        assert_eq!(parsed, distribution);
        assert_eq!(distribution_to_json(&problem, &parsed), text);
    }

    #[test]
    fn strategy_files_are_one_based() {
        let problem = fixture_problem(FixtureId::T1);
        let text = r#"[{"agent": 1, "round": 1, "allocation": [[], []], "declared": "0"}]"#;
        let strategy = parse_strategy(&problem, text).unwrap();
        let deviation = strategy.deviations().next().unwrap();
        assert_eq!((deviation.agent, deviation.node.round()), (0, 0));
        assert_eq!(deviation_json(&problem, &deviation)["round"], 1);
        let bad = r#"[{"agent": 3, "round": 1, "allocation": [[], []], "declared": "0"}]"#;
        assert!(matches!(parse_strategy(&problem, bad), Err(Error::Schema(_))));
    }
}
