use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mechanisms::Deviation;
use crate::model::Allocation;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Sp,
    Osp,
    Gsp,
    Efp,
    Efa,
    Ef1,
    Efx,
    Pep,
    Pea,
}

impl Axiom {
    pub const ALL: [Axiom; 9] = [
        Axiom::Sp,
        Axiom::Osp,
        Axiom::Gsp,
        Axiom::Efp,
        Axiom::Efa,
        Axiom::Ef1,
        Axiom::Efx,
        Axiom::Pep,
        Axiom::Pea,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Sp => "sp",
            Axiom::Osp => "osp",
            Axiom::Gsp => "gsp",
            Axiom::Efp => "efp",
            Axiom::Efa => "efa",
            Axiom::Ef1 => "ef1",
            Axiom::Efx => "efx",
            Axiom::Pep => "pep",
            Axiom::Pea => "pea",
        }
    }

    /// Incentive axioms are checked against the mechanism, not one distribution.
    pub fn is_incentive(self) -> bool {
        matches!(self, Axiom::Sp | Axiom::Osp | Axiom::Gsp)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let lower = text.trim().to_ascii_lowercase();
        Axiom::ALL
            .into_iter()
            .find(|axiom| axiom.name() == lower)
            .ok_or_else(|| Error::Schema(format!("unknown axiom `{text}`")))
    }
}

/// Evidence that an axiom fails. Agents and items are 0-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `envious` prefers `envied`'s bundle in a support allocation. For EF1
    /// and EFX, `residuals` lists `u_envious(π_envied ∖ {o}) − u_envious(π_envious)`
    /// for each removable item `o`; every entry is positive.
    Envy {
        allocation: Allocation,
        envious: usize,
        envied: usize,
        own_value: Rational,
        envied_value: Rational,
        residuals: Vec<(usize, Rational)>,
    },
    ExAnteEnvy {
        envious: usize,
        envied: usize,
        own_value: Rational,
        envied_value: Rational,
    },
    Dominated {
        allocation: Allocation,
        dominating: Allocation,
    },
    /// A mixture of allocations whose expected profile dominates `expected`.
    ExAnteDominated {
        expected: Vec<Rational>,
        dominating: Vec<Rational>,
        mixture: Vec<(Allocation, Rational)>,
    },
    /// Joint misreport by `coalition` raising the coalition's total expected utility.
    Manipulation {
        coalition: Vec<usize>,
        deviations: Vec<Deviation>,
        sincere_value: Rational,
        deviated_value: Rational,
    },
    /// One misreport at a reachable node, evaluated with that round as the horizon.
    OnlineManipulation {
        agent: usize,
        node: Allocation,
        declared: Rational,
        sincere_value: Rational,
        deviated_value: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub axiom: Axiom,
    pub holds: bool,
    pub witness: Option<Witness>,
    /// Present whenever the verdict rests on a bounded search.
    pub search_scope: Option<String>,
}

impl Verdict {
    pub fn holds(axiom: Axiom) -> Self {
        Verdict {
            axiom,
            holds: true,
            witness: None,
            search_scope: None,
        }
    }

    pub fn fails(axiom: Axiom, witness: Witness) -> Self {
        Verdict {
            axiom,
            holds: false,
            witness: Some(witness),
            search_scope: None,
        }
    }

    pub fn with_scope(mut self, scope: impl Into<String>) -> Self {
        self.search_scope = Some(scope.into());
        self
    }

    /// A passing verdict that only covers a bounded search space.
    pub fn is_bounded(&self) -> bool {
        self.holds && self.search_scope.is_some()
    }
}
