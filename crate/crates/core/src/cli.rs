//! The `fairdiv` command line.
//!
//! Exit codes: 0 success, 1 failed corpus expectations, 2 schema or
//! precondition errors, 3 capacity errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::axioms::{self, Axiom, Caps, Verdict};
use crate::corpus::{self, load_fixture, FixtureId};
use crate::error::{Error, Result};
use crate::io;
use crate::mechanisms::{self, Mechanism, StrategyProfile};
use crate::model::{classify, DomainFlags, Problem};
use crate::rational;

#[derive(Debug, Parser)]
#[command(
    name = "fairdiv",
    version,
    about = "Exact online fair division: run mechanisms and check axioms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the exact allocation distribution and expected-utility matrix.
    Run {
        #[command(flatten)]
        source: ProblemSource,
        /// Mechanism id, e.g. `minimum-like`, `fixed-agent(2)`, `tie-biased(1/2)`.
        #[arg(long)]
        mechanism: Mechanism,
        /// Deviation strategy file (JSON list of deviations); sincere if omitted.
        #[arg(long)]
        strategy: Option<PathBuf>,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Check axioms and print verdicts with witnesses.
    Check {
        #[command(flatten)]
        source: ProblemSource,
        /// Mechanism id, e.g. `minimum-like`, `fixed-agent(2)`, `tie-biased(1/2)`.
        #[arg(long)]
        mechanism: Mechanism,
        /// Axiom to check (repeatable); all axioms if omitted.
        #[arg(long = "axiom")]
        axioms: Vec<Axiom>,
        /// Deviation strategy file; sincere if omitted.
        #[arg(long)]
        strategy: Option<PathBuf>,
        /// Largest n^m enumerated for Pareto checks.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        cap: Option<u64>,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Run every fixture expectation; exit 1 if any fails.
    Corpus {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        cap: Option<u64>,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Verdict grid of every built-in mechanism against every axiom.
    Report {
        /// Fixture to include (repeatable); all fixtures if omitted.
        #[arg(long = "fixture")]
        fixtures: Vec<FixtureId>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        cap: Option<u64>,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct ProblemSource {
    /// Problem JSON file.
    #[arg(long, group = "source")]
    problem: Option<PathBuf>,
    /// Built-in fixture (E1, T1, T2, T4, T5, T6a, T6b, T8, T9, T10).
    #[arg(long, group = "source")]
    fixture: Option<FixtureId>,
    /// Seeded random problem in a comma-separated domain, e.g. `identical,nonzero-marginals`.
    #[arg(long, group = "source")]
    random: Option<String>,
    #[command(flatten)]
    shape: RandomShape,
}

/// Size and seed of a `--random` problem.
#[derive(Debug, Args)]
#[group(skip)]
pub struct RandomShape {
    /// Agents in the random problem [default: 2].
    #[arg(long)]
    agents: Option<usize>,
    /// Items in the random problem [default: 3].
    #[arg(long)]
    items: Option<usize>,
    /// Generator seed [default: 0].
    #[arg(long)]
    seed: Option<u64>,
}

impl ProblemSource {
    fn load(&self) -> Result<(String, Problem)> {
        let shape = &self.shape;
        if self.random.is_none() && (shape.agents.is_some() || shape.items.is_some() || shape.seed.is_some()) {
            return Err(Error::Schema(
                "--agents, --items and --seed only apply to --random".into(),
            ));
        }
        if let Some(path) = &self.problem {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))?;
            return Ok((path.display().to_string(), io::parse_problem(&text)?));
        }
        if let Some(id) = self.fixture {
            return Ok((id.to_string(), corpus::fixture_problem(id)));
        }
        let domain = parse_domain(self.random.as_deref().unwrap_or_default())?;
        let seed = shape.seed.unwrap_or(0);
        let problem = corpus::generate_random(&domain, shape.agents.unwrap_or(2), shape.items.unwrap_or(3), seed)?;
        Ok((format!("random seed {seed}"), problem))
    }
}

pub fn parse_domain(text: &str) -> Result<DomainFlags> {
    let mut flags = DomainFlags::default();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.to_ascii_lowercase().replace('_', "-").as_str() {
            "identical" => flags.identical = true,
            "additive" => flags.additive = true,
            "nonzero" | "nonzero-marginals" | "non-zero" => flags.nonzero_marginals = true,
            "zero-one" | "zero-one-marginals" | "01" => flags.zero_one_marginals = true,
            "positive-additive" => {
                flags.positive_additive = true;
                flags.additive = true;
                flags.nonzero_marginals = true;
            }
            "general" | "monotone" => {}
            _ => return Err(Error::Schema(format!("unknown domain flag `{part}`"))),
        }
    }
    Ok(flags)
}

pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::Capacity { .. } => 3,
        _ => 2,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn caps(cap: Option<u64>) -> Caps {
    let mut caps = Caps::default();
    if let Some(cap) = cap {
        caps.enumeration = u128::from(cap);
    }
    caps
}

fn load_strategy(problem: &Problem, path: Option<&PathBuf>) -> Result<StrategyProfile> {
    match path {
        None => Ok(StrategyProfile::sincere()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))?;
            io::parse_strategy(problem, &text)
        }
    }
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Run {
            source,
            mechanism,
            strategy,
            json,
        } => {
            let (label, problem) = source.load()?;
            mechanism.validate(problem.agents())?;
            let strategy = load_strategy(&problem, strategy.as_ref())?;
            let distribution = mechanisms::run(&problem, mechanism, &strategy);
            let expected = mechanisms::expected_utilities(&problem, &distribution);
            if *json {
                emit(
                    out,
                    &io::run_report_json(&problem, &mechanism.to_string(), &distribution, &expected),
                );
            } else {
                emit(
                    out,
                    &format!(
                        "problem: {label} ({} agents, {} items)\n",
                        problem.agents(),
                        problem.items()
                    ),
                );
                emit(out, &format!("mechanism: {mechanism}\n"));
                if !strategy.is_sincere() {
                    emit(out, &format!("strategy: {} deviation(s)\n", strategy.len()));
                }
                emit(out, "distribution:\n");
                for (allocation, p) in distribution.iter() {
                    emit(
                        out,
                        &format!(
                            "  {:>8}  {}\n",
                            rational::format(p),
                            problem.describe_allocation(allocation)
                        ),
                    );
                }
                emit(
                    out,
                    "expected utilities (row i: agent i's value for each agent's bundle):\n",
                );
                for (i, row) in expected.iter().enumerate() {
                    let cells: Vec<String> = row.iter().map(|v| format!("{:>8}", rational::format(v))).collect();
                    emit(out, &format!("  agent {}: {}\n", i + 1, cells.join(" ")));
                }
            }
            Ok(0)
        }
        Command::Check {
            source,
            mechanism,
            axioms: requested,
            strategy,
            cap,
            json,
        } => {
            let (label, problem) = source.load()?;
            mechanism.validate(problem.agents())?;
            let strategy = load_strategy(&problem, strategy.as_ref())?;
            let caps = caps(*cap);
            let list: Vec<Axiom> = if requested.is_empty() {
                Axiom::ALL.to_vec()
            } else {
                requested.clone()
            };
            let verdicts = list
                .iter()
                .map(|&axiom| axioms::check(&problem, mechanism, axiom, &strategy, &caps))
                .collect::<Result<Vec<Verdict>>>()?;
            if *json {
                let value = json!({
                    "problem": label,
                    "mechanism": mechanism.to_string(),
                    "verdicts": verdicts.iter().map(|v| io::verdict_json(&problem, v)).collect::<Vec<_>>(),
                });
                emit(
                    out,
                    &(serde_json::to_string_pretty(&value).expect("serializable") + "\n"),
                );
            } else {
                emit(out, &format!("problem: {label}; mechanism: {mechanism}\n"));
                for verdict in &verdicts {
                    let status = match (verdict.holds, verdict.is_bounded()) {
                        (false, _) => "fails",
                        (true, true) => "holds (no violation found within lattice)",
                        (true, false) => "holds",
                    };
                    emit(out, &format!("{}: {status}\n", verdict.axiom));
                    if let Some(witness) = &verdict.witness {
                        emit(
                            out,
                            &format!("  witness: {}\n", io::describe_witness(&problem, witness)),
                        );
                    }
                    if let Some(scope) = &verdict.search_scope {
                        emit(out, &format!("  scope: {scope}\n"));
                    }
                }
            }
            Ok(0)
        }
        Command::Corpus { cap, json } => {
            let outcomes = corpus::evaluate_all(&caps(*cap))?;
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            if *json {
                let value = json!({
                    "passed": outcomes.len() - failed,
                    "failed": failed,
                    "outcomes": outcomes.iter().map(|o| json!({
                        "fixture": o.fixture.name(),
                        "claim": o.claim,
                        "passed": o.passed,
                        "detail": o.detail,
                    })).collect::<Vec<_>>(),
                });
                emit(
                    out,
                    &(serde_json::to_string_pretty(&value).expect("serializable") + "\n"),
                );
            } else {
                for o in &outcomes {
                    let mark = if o.passed { "PASS" } else { "FAIL" };
                    emit(
                        out,
                        &format!("{mark} {:<4} {} ({})\n", o.fixture.name(), o.claim, o.detail),
                    );
                }
                emit(
                    out,
                    &format!(
                        "{} of {} expectations passed\n",
                        outcomes.len() - failed,
                        outcomes.len()
                    ),
                );
            }
            Ok(if failed == 0 { 0 } else { 1 })
        }
        Command::Report { fixtures, cap, json } => {
            let ids = if fixtures.is_empty() {
                FixtureId::ALL.to_vec()
            } else {
                fixtures.clone()
            };
            report(&ids, &caps(*cap), *json, out)?;
            Ok(0)
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) {
    // a closed pipe is not worth a panic
    let _ = out.write_all(text.as_bytes());
}

const TWO_BRANCH_NOTE: &str = "note: T6a and T6b are the two branches of one adversarial argument. \
The utility table is chosen after seeing where the mechanism sends o1, so neither table alone refutes EF1 \
for every mechanism; together they cover both cases.";

fn cell(verdict: &Result<Verdict>) -> &'static str {
    match verdict {
        Ok(v) if !v.holds => "×",
        Ok(v) if v.is_bounded() => "✓*",
        Ok(_) => "✓",
        Err(Error::Capacity { .. }) => "cap",
        Err(_) => "err",
    }
}

fn report(ids: &[FixtureId], caps: &Caps, json: bool, out: &mut dyn Write) -> Result<()> {
    let mut documents = Vec::new();
    if !json {
        emit(out, "key: ✓ holds, ✓* no violation found within lattice (bounded search), × does not hold, cap enumeration cap exceeded\n\n");
    }
    for &id in ids {
        let fixture = load_fixture(id);
        let problem = &fixture.problem;
        let mut rows = Vec::new();
        for mechanism in Mechanism::builtins(problem.agents()) {
            let verdicts: Vec<Result<Verdict>> = Axiom::ALL
                .iter()
                .map(|&axiom| axioms::check(problem, &mechanism, axiom, &StrategyProfile::sincere(), caps))
                .collect();
            rows.push((mechanism, verdicts));
        }
        if json {
            documents.push(json!({
                "fixture": id.name(),
                "title": fixture.title,
                "domain": classify(problem).label(),
                "rows": rows.iter().map(|(mechanism, verdicts)| json!({
                    "mechanism": mechanism.to_string(),
                    "cells": Axiom::ALL.iter().zip(verdicts).map(|(axiom, v)| json!({
                        "axiom": axiom.name(),
                        "holds": v.as_ref().ok().map(|v| v.holds),
                        "bounded": v.as_ref().ok().map(Verdict::is_bounded),
                        "error": v.as_ref().err().map(ToString::to_string),
                    })).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            }));
            continue;
        }
        emit(
            out,
            &format!("{id}: {} [{}]\n", fixture.title, classify(problem).label()),
        );
        let header: Vec<String> = Axiom::ALL.iter().map(|a| format!("{:>4}", a.name())).collect();
        emit(out, &format!("  {:<16}{}\n", "mechanism", header.join("")));
        for (mechanism, verdicts) in &rows {
            let cells: Vec<String> = verdicts.iter().map(|v| format!("{:>4}", cell(v))).collect();
            emit(out, &format!("  {:<16}{}\n", mechanism.to_string(), cells.join("")));
        }
        emit(out, "\n");
    }
    let mentions_t6 = ids.iter().any(|id| matches!(id, FixtureId::T6a | FixtureId::T6b));
    if json {
        let mut value = json!({ "fixtures": documents });
        if mentions_t6 {
            value["note"] = json!(TWO_BRANCH_NOTE);
        }
        emit(
            out,
            &(serde_json::to_string_pretty(&value).expect("serializable") + "\n"),
        );
    } else if mentions_t6 {
        emit(out, &format!("{TWO_BRANCH_NOTE}\n"));
    }
    Ok(())
}
