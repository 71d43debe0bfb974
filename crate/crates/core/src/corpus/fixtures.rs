use std::fmt;
use std::str::FromStr;

use crate::axioms::Axiom;
use crate::error::{Error, Result};
use crate::mechanisms::Mechanism;
use crate::model::{ItemSet, Problem, UtilityFunction};
use crate::oracles::OfflineProperty;
use crate::rational::{int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FixtureId {
    E1,
    T1,
    T2,
    T4,
    T5,
    T6a,
    T6b,
    T8,
    T9,
    T10,
}

impl FixtureId {
    pub const ALL: [FixtureId; 10] = [
        FixtureId::E1,
        FixtureId::T1,
        FixtureId::T2,
        FixtureId::T4,
        FixtureId::T5,
        FixtureId::T6a,
        FixtureId::T6b,
        FixtureId::T8,
        FixtureId::T9,
        FixtureId::T10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixtureId::E1 => "E1",
            FixtureId::T1 => "T1",
            FixtureId::T2 => "T2",
            FixtureId::T4 => "T4",
            FixtureId::T5 => "T5",
            FixtureId::T6a => "T6a",
            FixtureId::T6b => "T6b",
            FixtureId::T8 => "T8",
            FixtureId::T9 => "T9",
            FixtureId::T10 => "T10",
        }
    }
}

impl fmt::Display for FixtureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FixtureId {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        FixtureId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(text.trim()))
            .ok_or_else(|| Error::UnknownFixture(text.to_string()))
    }
}

/// Which mechanisms an axiom expectation quantifies over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scope {
    Named(Mechanism),
    /// The built-in non-wasteful mechanisms and the tie-biased family.
    AnyNonWasteful,
    TieBiasedFamily,
    /// Every built-in mechanism.
    Any,
}

impl Scope {
    pub fn mechanisms(&self, agents: usize) -> Vec<Mechanism> {
        match self {
            Scope::Named(mechanism) => vec![mechanism.clone()],
            Scope::AnyNonWasteful => {
                let mut all = Mechanism::builtin_non_wasteful();
                all.extend(Mechanism::tie_biased_family());
                all
            }
            Scope::TieBiasedFamily => Mechanism::tie_biased_family(),
            Scope::Any => Mechanism::builtins(agents),
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Named(mechanism) => write!(f, "{mechanism}"),
            Scope::AnyNonWasteful => f.write_str("any-non-wasteful"),
            Scope::TieBiasedFamily => f.write_str("tie-biased family"),
            Scope::Any => f.write_str("any"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expectation {
    Axiom {
        scope: Scope,
        axiom: Axiom,
        holds: bool,
        note: &'static str,
    },
    /// Whether some full allocation (offline) has the property.
    OfflineExists {
        property: OfflineProperty,
        exists: bool,
        note: &'static str,
    },
    /// After giving the first item to `first_owner`, no continuation that
    /// stays EF1 at every round reaches the last item.
    NoEf1Continuation { first_owner: usize, note: &'static str },
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub id: FixtureId,
    pub title: &'static str,
    pub problem: Problem,
    pub expectations: Vec<Expectation>,
}

pub fn fixture_problem(id: FixtureId) -> Problem {
    let tables: Vec<Vec<i64>> = match id {
        FixtureId::E1 => vec![vec![0, 2, 4, 6], vec![0, 5, 2, 5]],
        FixtureId::T1 => identical(by_size(3, |b| match b.len() {
            0 => 0,
            1 => 1,
            2 if b == set(&[1, 2]) => 2,
            2 => 1,
            _ => 2,
        })),
        FixtureId::T2 => vec![vec![0, 0, 0, 1], vec![0, 1, 1, 2]],
        FixtureId::T4 => identical(by_size(4, |b| match b.len() {
            0 => 0,
            1 => 1,
            2 if b.contains(0) => 1,
            2 => 2,
            3 if b == set(&[1, 2, 3]) => 3,
            3 => 2,
            _ => 3,
        })),
        FixtureId::T5 => identical(by_size(4, |b| match b.len() {
            0 => 0,
            1 if b == set(&[2]) || b == set(&[3]) => 2,
            1 => 1,
            2 if b == set(&[0, 1]) => 1,
            2 => 2,
            3 if b == set(&[0, 1, 3]) => 3,
            3 => 2,
            _ => 3,
        })),
        FixtureId::T6a => additive(&[&[50, 100, 100], &[100, 50, 100]]),
        FixtureId::T6b => additive(&[&[50, 40, 410], &[100, 200, 200]]),
        FixtureId::T8 => additive(&[&[1, 2], &[1, 2]]),
        FixtureId::T9 => identical(vec![0, 1, 2, 4, 3, 4, 4, 5]),
        FixtureId::T10 => additive(&[&[1, 2, 3], &[1, 2, 3]]),
    };
    problem_from(tables)
}

/// Two agents, one item worth 1 to agent 1 and 2 to agent 2.
pub fn two_agents_one_item() -> Problem {
    problem_from(vec![vec![0, 1], vec![0, 2]])
}

pub fn load_fixture(id: FixtureId) -> Fixture {
    use Expectation::{NoEf1Continuation, OfflineExists};
    let min_like = || Scope::Named(Mechanism::MinimumLike);
    let min_utility = || Scope::Named(Mechanism::MinimumUtility);
    let (title, mut expectations) = match id {
        FixtureId::E1 => (
            "two agents with bundle utilities and order-dependent marginals",
            vec![
                claim(
                    min_like(),
                    Axiom::Efp,
                    false,
                    "agent 1 envies when it receives o1 first",
                ),
                claim(min_like(), Axiom::Ef1, true, "singleton bundles are always EF1"),
                claim(min_like(), Axiom::Pep, false, "({o1},{o2}) is dominated by the swap"),
                OfflineExists {
                    property: OfflineProperty::Ef,
                    exists: true,
                    note: "({o2},{o1}) is envy-free",
                },
            ],
        ),
        FixtureId::T1 => (
            "identical 0/1 marginals: zero-bidding the first item pays",
            vec![
                claim(
                    Scope::AnyNonWasteful,
                    Axiom::Sp,
                    false,
                    "the tie loser collects both later items",
                ),
                claim(min_like(), Axiom::Ef1, true, "identical utilities"),
            ],
        ),
        FixtureId::T2 => (
            "complementary items: non-wasteful play hands both to agent 2",
            vec![
                claim(
                    Scope::AnyNonWasteful,
                    Axiom::Efp,
                    false,
                    "agent 1 bids zero on both items",
                ),
                claim(Scope::AnyNonWasteful, Axiom::Efa, false, "point mass on (∅,{o1,o2})"),
                OfflineExists {
                    property: OfflineProperty::Ef,
                    exists: true,
                    note: "one item each",
                },
            ],
        ),
        FixtureId::T4 => (
            "identical monotone utilities: online non-wasteful allocation is not EF1",
            vec![
                claim(
                    Scope::AnyNonWasteful,
                    Axiom::Ef1,
                    false,
                    "the o1 holder bids zero on everything else",
                ),
                claim(
                    min_utility(),
                    Axiom::Ef1,
                    true,
                    "ignores bids and balances declared utility",
                ),
                OfflineExists {
                    property: OfflineProperty::Ef1,
                    exists: true,
                    note: "offline EF1 allocations exist, two items each among them",
                },
            ],
        ),
        FixtureId::T5 => (
            "identical monotone utilities: every mechanism is Pareto dominated",
            vec![
                claim(
                    Scope::AnyNonWasteful,
                    Axiom::Pep,
                    false,
                    "every support allocation is dominated",
                ),
                claim(
                    Scope::AnyNonWasteful,
                    Axiom::Pea,
                    false,
                    "expected profile (2,2) is dominated",
                ),
                claim(min_like(), Axiom::Efa, true, "identical utilities"),
            ],
        ),
        FixtureId::T6a => (
            "positive additive utilities, first branch: o1 goes to agent 1",
            vec![
                NoEf1Continuation {
                    first_owner: 0,
                    note: "o2 must go to agent 2, then o3 breaks EF1 either way",
                },
                OfflineExists {
                    property: OfflineProperty::Ef1,
                    exists: true,
                    note: "offline EF1 allocations exist",
                },
            ],
        ),
        FixtureId::T6b => (
            "positive additive utilities, second branch: o1 goes to agent 2",
            vec![
                NoEf1Continuation {
                    first_owner: 1,
                    note: "o2 must go to agent 1, then o3 breaks EF1 either way",
                },
                OfflineExists {
                    property: OfflineProperty::Ef1,
                    exists: true,
                    note: "offline EF1 allocations exist",
                },
            ],
        ),
        FixtureId::T8 => (
            "identical additive utilities: EF1 costs strategy-proofness",
            vec![
                claim(min_like(), Axiom::Sp, false, "agent 1 zero-bids o1 and receives o2"),
                claim(min_like(), Axiom::Ef1, true, "identical additive utilities"),
                claim(
                    min_like(),
                    Axiom::Pep,
                    true,
                    "every full allocation has the same welfare",
                ),
                claim(
                    min_like(),
                    Axiom::Pea,
                    true,
                    "every full allocation has the same welfare",
                ),
                claim(min_utility(), Axiom::Sp, false, "zero-bidding o1 still pays"),
                claim(Scope::TieBiasedFamily, Axiom::Sp, false, "whatever the tie-break share"),
            ],
        ),
        FixtureId::T9 => (
            "identical non-zero marginals: EF1 costs Pareto efficiency",
            vec![
                claim(min_like(), Axiom::Ef1, true, "identical non-zero marginals"),
                claim(
                    min_like(),
                    Axiom::Pep,
                    false,
                    "({o1,o3},{o2}) is dominated by ({o1,o2},{o3})",
                ),
                claim(min_like(), Axiom::Pea, false, "expected profile (3,3) is dominated"),
            ],
        ),
        FixtureId::T10 => (
            "identical additive utilities: no non-wasteful mechanism is EFX",
            vec![
                claim(
                    Scope::AnyNonWasteful,
                    Axiom::Efx,
                    false,
                    "o1 and o2 cannot both be kept together",
                ),
                OfflineExists {
                    property: OfflineProperty::Efx,
                    exists: true,
                    note: "({o1,o2},{o3}) and its swap",
                },
                claim(min_like(), Axiom::Ef1, true, "identical additive utilities"),
                claim(min_like(), Axiom::Efa, true, "identical utilities"),
                claim(
                    min_like(),
                    Axiom::Pep,
                    true,
                    "every full allocation has the same welfare",
                ),
                claim(
                    min_like(),
                    Axiom::Pea,
                    true,
                    "every full allocation has the same welfare",
                ),
            ],
        ),
    };
    expectations.extend([
        claim(min_like(), Axiom::Osp, true, "online strategy-proof"),
        claim(min_utility(), Axiom::Osp, true, "online strategy-proof"),
        claim(Scope::Named(Mechanism::Uniform), Axiom::Sp, true, "bids are ignored"),
        claim(
            Scope::Named(Mechanism::Uniform),
            Axiom::Efa,
            true,
            "every agent is treated alike",
        ),
    ]);
    Fixture {
        id,
        title,
        problem: fixture_problem(id),
        expectations,
    }
}

fn claim(scope: Scope, axiom: Axiom, holds: bool, note: &'static str) -> Expectation {
    Expectation::Axiom {
        scope,
        axiom,
        holds,
        note,
    }
}

fn set(items: &[usize]) -> ItemSet {
    ItemSet::from_items(items.iter().copied())
}

fn by_size(m: usize, value: impl Fn(ItemSet) -> i64) -> Vec<i64> {
    ItemSet::all_subsets(m).map(value).collect()
}

fn identical(table: Vec<i64>) -> Vec<Vec<i64>> {
    vec![table.clone(), table]
}

fn additive(values: &[&[i64]]) -> Vec<Vec<i64>> {
    values
        .iter()
        .map(|row| {
            let u = UtilityFunction::additive(&row.iter().map(|&v| int(v)).collect::<Vec<_>>()).expect("small table");
            u.table()
                .iter()
                .map(|v| v.to_integer().try_into().expect("small value"))
                .collect()
        })
        .collect()
}

fn problem_from(tables: Vec<Vec<i64>>) -> Problem {
    let utilities = tables
        .into_iter()
        .map(|table| {
            let m = table.len().trailing_zeros() as usize;
            UtilityFunction::from_table(m, table.into_iter().map(int).collect::<Vec<Rational>>())
                .expect("fixture tables are well formed")
        })
        .collect();
    Problem::with_default_names(utilities).expect("fixture utilities are monotone")
}
