//! Verifiers for the axiomatic properties of online mechanisms.
//!
//! Distribution axioms (EFP, EFA, EF1, EFX, PEP, PEA) inspect an exact
//! allocation distribution. Incentive axioms (SP, OSP, GSP) search over
//! misreports against the mechanism's decision tree.

mod envy;
mod incentives;
mod lattice;
mod pareto;
mod recheck;
mod verdict;

pub use envy::{
    check_ef1, check_efa, check_efp, check_efx, ef1_violation, efx_violation, envy_violation, is_ef, is_ef1, is_efx,
};
pub use incentives::{best_response, check_gsp, check_osp, check_sp, BestResponse};
pub use lattice::MisreportLattice;
pub use pareto::{check_pea, check_pep, ex_ante_slack, pareto_dominator, ExAnteSlack};
pub use recheck::recheck_witness;
pub use verdict::{Axiom, Verdict, Witness};

use crate::error::Result;
use crate::mechanisms::{self, Mechanism, StrategyProfile};
use crate::model::Problem;

/// Size limits for the brute-force parts of the verifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest `n^m` for which all allocations are enumerated (PEP, PEA).
    pub enumeration: u128,
    /// Distinct decision states the exhaustive misreport search may visit.
    pub strategy_states: usize,
    /// Largest node count whose zero-bid subsets are all tried.
    pub zero_bid_nodes: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: 4096,
            strategy_states: 200_000,
            zero_bid_nodes: 12,
        }
    }
}

/// Checks one axiom for a mechanism under the given (usually sincere) strategy.
pub fn check(
    problem: &Problem,
    mechanism: &Mechanism,
    axiom: Axiom,
    strategy: &StrategyProfile,
    caps: &Caps,
) -> Result<Verdict> {
    if axiom.is_incentive() {
        return Ok(match axiom {
            Axiom::Sp => check_sp(problem, mechanism, caps),
            Axiom::Osp => check_osp(problem, mechanism),
            _ => check_gsp(problem, mechanism, caps),
        });
    }
    let distribution = mechanisms::run(problem, mechanism, strategy);
    match axiom {
        Axiom::Efp => Ok(check_efp(problem, &distribution)),
        Axiom::Efa => Ok(check_efa(problem, &distribution)),
        Axiom::Ef1 => Ok(check_ef1(problem, &distribution)),
        Axiom::Efx => Ok(check_efx(problem, &distribution)),
        Axiom::Pep => check_pep(problem, &distribution, caps),
        _ => check_pea(problem, &distribution, caps),
    }
}
