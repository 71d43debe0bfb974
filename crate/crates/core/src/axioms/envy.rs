use num_traits::Zero;

use super::verdict::{Axiom, Verdict, Witness};
use crate::mechanisms::expected_utilities;
use crate::model::{Allocation, AllocationDistribution, Problem};
use crate::rational::Rational;

/// First `(i, k)` pair, in index order, where `i` strictly prefers `π_k`.
pub fn envy_violation(problem: &Problem, allocation: &Allocation) -> Option<Witness> {
    pairs(problem.agents()).find_map(|(i, k)| {
        let u = problem.utility(i);
        let own = u.value(allocation.bundle(i));
        let other = u.value(allocation.bundle(k));
        (own < other).then(|| Witness::Envy {
            allocation: allocation.clone(),
            envious: i,
            envied: k,
            own_value: own.clone(),
            envied_value: other.clone(),
            residuals: Vec::new(),
        })
    })
}

/// First pair where no single item removal from `π_k` removes `i`'s envy.
pub fn ef1_violation(problem: &Problem, allocation: &Allocation) -> Option<Witness> {
    pairs(problem.agents()).find_map(|(i, k)| {
        let bundle = allocation.bundle(k);
        if bundle.is_empty() {
            return None;
        }
        let residuals = residuals(problem, allocation, i, k, |_| true);
        residuals
            .iter()
            .all(|(_, r)| *r > Rational::zero())
            .then(|| envy_witness(problem, allocation, i, k, residuals))
    })
}

/// First pair where removing some positively-valued item from `π_k` leaves envy.
pub fn efx_violation(problem: &Problem, allocation: &Allocation) -> Option<Witness> {
    pairs(problem.agents()).find_map(|(i, k)| {
        let u = problem.utility(i);
        let residuals = residuals(problem, allocation, i, k, |o| *u.item_value(o) > Rational::zero());
        residuals.iter().any(|(_, r)| *r > Rational::zero()).then(|| {
            let positive = residuals.into_iter().filter(|(_, r)| *r > Rational::zero()).collect();
            envy_witness(problem, allocation, i, k, positive)
        })
    })
}

pub fn is_ef(problem: &Problem, allocation: &Allocation) -> bool {
    envy_violation(problem, allocation).is_none()
}

pub fn is_ef1(problem: &Problem, allocation: &Allocation) -> bool {
    ef1_violation(problem, allocation).is_none()
}

pub fn is_efx(problem: &Problem, allocation: &Allocation) -> bool {
    efx_violation(problem, allocation).is_none()
}

pub fn check_efp(problem: &Problem, distribution: &AllocationDistribution) -> Verdict {
    ex_post(Axiom::Efp, problem, distribution, envy_violation)
}

pub fn check_ef1(problem: &Problem, distribution: &AllocationDistribution) -> Verdict {
    ex_post(Axiom::Ef1, problem, distribution, ef1_violation)
}

pub fn check_efx(problem: &Problem, distribution: &AllocationDistribution) -> Verdict {
    ex_post(Axiom::Efx, problem, distribution, efx_violation)
}

pub fn check_efa(problem: &Problem, distribution: &AllocationDistribution) -> Verdict {
    let matrix = expected_utilities(problem, distribution);
    let violation = pairs(problem.agents()).find(|&(i, k)| matrix[i][i] < matrix[i][k]);
    match violation {
        None => Verdict::holds(Axiom::Efa),
        Some((i, k)) => Verdict::fails(
            Axiom::Efa,
            Witness::ExAnteEnvy {
                envious: i,
                envied: k,
                own_value: matrix[i][i].clone(),
                envied_value: matrix[i][k].clone(),
            },
        ),
    }
}

fn ex_post<F>(axiom: Axiom, problem: &Problem, distribution: &AllocationDistribution, violation: F) -> Verdict
where
    F: Fn(&Problem, &Allocation) -> Option<Witness>,
{
    distribution
        .allocations()
        .find_map(|allocation| violation(problem, allocation))
        .map_or_else(|| Verdict::holds(axiom), |witness| Verdict::fails(axiom, witness))
}

fn pairs(agents: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..agents).flat_map(move |i| (0..agents).filter(move |&k| k != i).map(move |k| (i, k)))
}

fn residuals<F: Fn(usize) -> bool>(
    problem: &Problem,
    allocation: &Allocation,
    i: usize,
    k: usize,
    removable: F,
) -> Vec<(usize, Rational)> {
    let u = problem.utility(i);
    let own = u.value(allocation.bundle(i));
    let bundle = allocation.bundle(k);
    bundle
        .items()
        .filter(|&o| removable(o))
        .map(|o| (o, u.value(bundle.without(o)) - own))
        .collect()
}

fn envy_witness(
    problem: &Problem,
    allocation: &Allocation,
    i: usize,
    k: usize,
    residuals: Vec<(usize, Rational)>,
) -> Witness {
    let u = problem.utility(i);
    Witness::Envy {
        allocation: allocation.clone(),
        envious: i,
        envied: k,
        own_value: u.value(allocation.bundle(i)).clone(),
        envied_value: u.value(allocation.bundle(k)).clone(),
        residuals,
    }
}
