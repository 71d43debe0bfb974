//! Misreport searches for SP, GSP and OSP.
//!
//! The exhaustive search is a backward induction over the decision tree: at
//! each node the deviating agents pick the lattice bids maximizing their
//! joint expected utility, given optimal play below. Subtrees are memoized on
//! the node state (the declared utilities are dropped from the key when the
//! mechanism never reads them).

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;

use super::lattice::MisreportLattice;
use super::verdict::{Axiom, Verdict, Witness};
use super::Caps;
use crate::mechanisms::{self, expand, BidDependence, Mechanism, MechanismState, NodeState, StrategyProfile};
use crate::model::{Allocation, Problem};
use crate::rational::Rational;

/// Optimal joint misreport of a coalition over the lattice.
#[derive(Clone, Debug)]
pub struct BestResponse {
    pub sincere_value: Rational,
    pub best_value: Rational,
    /// Only the nodes where some member departs from sincere play.
    pub strategy: StrategyProfile,
    pub states: usize,
}

/// Exhaustive node-wise lattice search for `coalition`, others sincere.
/// Returns `None` when more than `state_budget` decision states would be needed.
pub fn best_response(
    problem: &Problem,
    mechanism: &Mechanism,
    coalition: &[usize],
    lattice: &MisreportLattice,
    state_budget: usize,
) -> Option<BestResponse> {
    let mut solver = Solver {
        problem,
        mechanism,
        members: coalition,
        lattice,
        memo: HashMap::new(),
        budget: state_budget,
    };
    let root = initial_state(problem.agents());
    let best_value = solver.solve(&root).ok()?;
    let mut strategy = StrategyProfile::sincere();
    solver.extract(&root, &mut strategy);
    let sincere_value = coalition_value(problem, mechanism, coalition, &StrategyProfile::sincere());
    let replayed = coalition_value(problem, mechanism, coalition, &strategy);
    assert_eq!(
        replayed, best_value,
        "engine replay disagrees with the misreport search"
    );
    Some(BestResponse {
        sincere_value,
        best_value,
        strategy,
        states: solver.memo.len(),
    })
}

pub fn check_sp(problem: &Problem, mechanism: &Mechanism, caps: &Caps) -> Verdict {
    let lattice = MisreportLattice::for_problem(problem);
    let mut scopes = Vec::new();
    for agent in 0..problem.agents() {
        match search(problem, mechanism, &[agent], &lattice, caps) {
            Ok(witness) => return Verdict::fails(Axiom::Sp, witness).with_scope(search_label(&[agent], &lattice)),
            Err(scope) => scopes.push(scope),
        }
    }
    Verdict::holds(Axiom::Sp).with_scope(summary(&lattice, &scopes))
}

/// Coalitions are tried by size, then lexicographically; singletons first.
pub fn check_gsp(problem: &Problem, mechanism: &Mechanism, caps: &Caps) -> Verdict {
    let lattice = MisreportLattice::for_problem(problem);
    let mut scopes = Vec::new();
    for coalition in coalitions(problem.agents()) {
        match search(problem, mechanism, &coalition, &lattice, caps) {
            Ok(witness) => return Verdict::fails(Axiom::Gsp, witness).with_scope(search_label(&coalition, &lattice)),
            Err(scope) => scopes.push(scope),
        }
    }
    Verdict::holds(Axiom::Gsp).with_scope(summary(&lattice, &scopes))
}

/// Every node reachable under sincere play, every agent, every lattice bid
/// at that single node, with the node's round as the horizon.
pub fn check_osp(problem: &Problem, mechanism: &Mechanism) -> Verdict {
    let lattice = MisreportLattice::for_problem(problem);
    let expansion = expand(problem, mechanism, &StrategyProfile::sincere());
    let agents = problem.agents();
    let mut nodes = 0usize;
    for item in 0..problem.items() {
        let horizon = expansion.distribution_at(item + 1);
        let totals: Vec<Rational> = (0..agents)
            .map(|i| mechanisms::expected_utilities(problem, &horizon)[i][i].clone())
            .collect();
        for (state, probability) in &expansion.frontiers[item] {
            nodes += 1;
            let view = view_of(state);
            let sincere = sincere_bids(problem, &state.allocation, item);
            let base = mechanism.round_probabilities(&view, &sincere);
            for agent in 0..agents {
                let u = problem.utility(agent);
                let bundle = state.allocation.bundle(agent);
                let horizon_value = |shares: &[Rational]| -> Rational {
                    shares
                        .iter()
                        .enumerate()
                        .map(|(k, p)| {
                            if k == agent {
                                p * u.value(bundle.with(item))
                            } else {
                                p * u.value(bundle)
                            }
                        })
                        .sum()
                };
                let sincere_value = horizon_value(&base);
                for declared in lattice.values() {
                    if *declared == sincere[agent] {
                        continue;
                    }
                    let mut bids = sincere.clone();
                    bids[agent] = declared.clone();
                    let deviated = horizon_value(&mechanism.round_probabilities(&view, &bids));
                    if deviated > sincere_value {
                        let gain = probability * (&deviated - &sincere_value);
                        return Verdict::fails(
                            Axiom::Osp,
                            Witness::OnlineManipulation {
                                agent,
                                node: state.allocation.clone(),
                                declared: declared.clone(),
                                sincere_value: totals[agent].clone(),
                                deviated_value: &totals[agent] + gain,
                            },
                        )
                        .with_scope(format!(
                            "single-node misreports over a lattice of {} values",
                            lattice.len()
                        ));
                    }
                }
            }
        }
    }
    Verdict::holds(Axiom::Osp).with_scope(format!(
        "no violation found within lattice: {nodes} reachable nodes, {agents} agents, {} candidate bids each",
        lattice.len()
    ))
}

/// `Ok(witness)` on a strict improvement, `Err(scope)` describing what was searched otherwise.
fn search(
    problem: &Problem,
    mechanism: &Mechanism,
    coalition: &[usize],
    lattice: &MisreportLattice,
    caps: &Caps,
) -> Result<Witness, String> {
    if let Some(best) = best_response(problem, mechanism, coalition, lattice, caps.strategy_states) {
        if best.best_value > best.sincere_value {
            return Ok(Witness::Manipulation {
                coalition: coalition.to_vec(),
                deviations: best.strategy.deviations().collect(),
                sincere_value: best.sincere_value,
                deviated_value: best.best_value,
            });
        }
        return Err(format!(
            "{}: exhaustive over {} decision states",
            label(coalition),
            best.states
        ));
    }
    bounded_search(problem, mechanism, coalition, lattice, caps)
}

/// Fallback when the exhaustive search is over budget: every single-node
/// misreport by one member, then every set of zero bids on nodes where a
/// member would bid positively.
fn bounded_search(
    problem: &Problem,
    mechanism: &Mechanism,
    coalition: &[usize],
    lattice: &MisreportLattice,
    caps: &Caps,
) -> Result<Witness, String> {
    let sincere_value = coalition_value(problem, mechanism, coalition, &StrategyProfile::sincere());
    let expansion = expand(problem, mechanism, &StrategyProfile::sincere());
    let nodes: BTreeSet<Allocation> = expansion.frontiers[..problem.items()]
        .iter()
        .flat_map(|frontier| frontier.keys().map(|s| s.allocation.clone()))
        .collect();
    let try_profile = |profile: StrategyProfile| -> Option<Witness> {
        let value = coalition_value(problem, mechanism, coalition, &profile);
        (value > sincere_value).then(|| Witness::Manipulation {
            coalition: coalition.to_vec(),
            deviations: profile.deviations().collect(),
            sincere_value: sincere_value.clone(),
            deviated_value: value,
        })
    };

    let mut single_runs = 0usize;
    let mut zero_candidates = Vec::new();
    for node in &nodes {
        let item = node.round();
        let sincere = sincere_bids(problem, node, item);
        for &member in coalition {
            if sincere[member] > Rational::zero() {
                zero_candidates.push((member, node.clone()));
            }
            for declared in lattice.values() {
                if *declared == sincere[member] {
                    continue;
                }
                single_runs += 1;
                let profile = StrategyProfile::sincere()
                    .with(member, node.clone(), declared.clone())
                    .expect("lattice values are nonnegative");
                if let Some(witness) = try_profile(profile) {
                    return Ok(witness);
                }
            }
        }
    }

    let mut scope = format!(
        "{}: exhaustive search over budget ({} states); {single_runs} single-node misreports",
        label(coalition),
        caps.strategy_states
    );
    if zero_candidates.len() > caps.zero_bid_nodes {
        scope.push_str(&format!(
            "; zero-bid subsets skipped ({} nodes > cap {})",
            zero_candidates.len(),
            caps.zero_bid_nodes
        ));
        return Err(scope);
    }
    let mut subset_runs = 0usize;
    for mask in 1u64..(1u64 << zero_candidates.len()) {
        if mask.count_ones() < 2 {
            continue;
        }
        subset_runs += 1;
        let mut profile = StrategyProfile::sincere();
        for (t, (member, node)) in zero_candidates.iter().enumerate() {
            if mask & (1 << t) != 0 {
                profile
                    .set(*member, node.clone(), Rational::zero())
                    .expect("zero is nonnegative");
            }
        }
        if let Some(witness) = try_profile(profile) {
            return Ok(witness);
        }
    }
    scope.push_str(&format!("; {subset_runs} zero-bid subsets"));
    Err(scope)
}

fn coalition_value(
    problem: &Problem,
    mechanism: &Mechanism,
    coalition: &[usize],
    strategy: &StrategyProfile,
) -> Rational {
    let distribution = mechanisms::run(problem, mechanism, strategy);
    distribution
        .iter()
        .map(|(allocation, p)| {
            let welfare: Rational = coalition
                .iter()
                .map(|&i| problem.utility(i).value(allocation.bundle(i)).clone())
                .sum();
            p * welfare
        })
        .sum()
}

fn coalitions(agents: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (1u32..(1 << agents))
        .map(|mask| (0..agents).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    all.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all
}

fn label(coalition: &[usize]) -> String {
    let names: Vec<String> = coalition.iter().map(|i| (i + 1).to_string()).collect();
    if coalition.len() == 1 {
        format!("agent {}", names[0])
    } else {
        format!("coalition {{{}}}", names.join(","))
    }
}

fn search_label(coalition: &[usize], lattice: &MisreportLattice) -> String {
    format!(
        "{} misreporting over a lattice of {} values",
        label(coalition),
        lattice.len()
    )
}

fn summary(lattice: &MisreportLattice, scopes: &[String]) -> String {
    format!(
        "no violation found within lattice of {} values; {}",
        lattice.len(),
        scopes.join("; ")
    )
}

fn initial_state(agents: usize) -> NodeState {
    NodeState {
        allocation: Allocation::empty(agents),
        declared: vec![Rational::zero(); agents],
    }
}

fn view_of(state: &NodeState) -> MechanismState {
    MechanismState {
        round: state.allocation.round(),
        allocation: state.allocation.clone(),
        declared: state.declared.clone(),
    }
}

fn sincere_bids(problem: &Problem, allocation: &Allocation, item: usize) -> Vec<Rational> {
    (0..problem.agents())
        .map(|i| {
            problem
                .marginal(i, allocation.bundle(i), item)
                .expect("node allocations never hold the arriving item")
        })
        .collect()
}

struct OverBudget;

struct Solved {
    value: Rational,
    /// Bids of the coalition members at this node, in coalition order.
    choice: Vec<Rational>,
}

struct Solver<'a> {
    problem: &'a Problem,
    mechanism: &'a Mechanism,
    members: &'a [usize],
    lattice: &'a MisreportLattice,
    memo: HashMap<(Allocation, Vec<Rational>), Solved>,
    budget: usize,
}

type ChildCache = HashMap<(usize, Rational), Rational>;

impl Solver<'_> {
    fn key(&self, state: &NodeState) -> (Allocation, Vec<Rational>) {
        let declared = if self.mechanism.uses_declared_utility() {
            state.declared.clone()
        } else {
            Vec::new()
        };
        (state.allocation.clone(), declared)
    }

    fn child_state(state: &NodeState, item: usize, receiver: usize, bid: &Rational) -> NodeState {
        let mut declared = state.declared.clone();
        declared[receiver] += bid;
        NodeState {
            allocation: state.allocation.give(item, receiver),
            declared,
        }
    }

    fn child(
        &mut self,
        state: &NodeState,
        item: usize,
        receiver: usize,
        bid: &Rational,
        cache: &mut ChildCache,
    ) -> Result<Rational, OverBudget> {
        if let Some(value) = cache.get(&(receiver, bid.clone())) {
            return Ok(value.clone());
        }
        let value = self.solve(&Self::child_state(state, item, receiver, bid))?;
        cache.insert((receiver, bid.clone()), value.clone());
        Ok(value)
    }

    fn evaluate(
        &mut self,
        state: &NodeState,
        item: usize,
        shares: &[Rational],
        bids: &[Rational],
        cache: &mut ChildCache,
    ) -> Result<Rational, OverBudget> {
        let mut total = Rational::zero();
        for (k, share) in shares.iter().enumerate() {
            if !share.is_zero() {
                total += share * self.child(state, item, k, &bids[k], cache)?;
            }
        }
        Ok(total)
    }

    /// Best bid for member `k` among `candidates` by child value, keeping `sincere` on ties.
    fn best_bid(
        &mut self,
        state: &NodeState,
        item: usize,
        k: usize,
        sincere: &Rational,
        candidates: &[Rational],
        cache: &mut ChildCache,
    ) -> Result<Rational, OverBudget> {
        let mut best = if candidates.contains(sincere) {
            Some((sincere.clone(), self.child(state, item, k, sincere, cache)?))
        } else {
            None
        };
        for x in candidates {
            let value = self.child(state, item, k, x, cache)?;
            if best.as_ref().is_none_or(|(_, b)| value > *b) {
                best = Some((x.clone(), value));
            }
        }
        Ok(best.expect("candidate bids are never empty").0)
    }

    fn solve(&mut self, state: &NodeState) -> Result<Rational, OverBudget> {
        let key = self.key(state);
        if let Some(solved) = self.memo.get(&key) {
            return Ok(solved.value.clone());
        }
        if self.memo.len() >= self.budget {
            return Err(OverBudget);
        }
        let item = state.allocation.round();
        if item == self.problem.items() {
            let value = self
                .members
                .iter()
                .map(|&i| self.problem.utility(i).value(state.allocation.bundle(i)).clone())
                .sum();
            self.memo.insert(
                key,
                Solved {
                    value: Rational::clone(&value),
                    choice: Vec::new(),
                },
            );
            return Ok(value);
        }

        let view = view_of(state);
        let sincere = sincere_bids(self.problem, &state.allocation, item);
        let with_choice = |choice: &[Rational]| -> Vec<Rational> {
            let mut bids = sincere.clone();
            for (t, &member) in self.members.iter().enumerate() {
                bids[member] = choice[t].clone();
            }
            bids
        };
        let mut cache = ChildCache::new();
        let sincere_choice: Vec<Rational> = self.members.iter().map(|&m| sincere[m].clone()).collect();
        let sincere_shares = self.mechanism.round_probabilities(&view, &sincere);
        let mut best_value = self.evaluate(state, item, &sincere_shares, &sincere, &mut cache)?;
        let mut best_choice = sincere_choice.clone();

        match self.mechanism.bid_dependence() {
            BidDependence::None => {
                let mut choice = sincere_choice.clone();
                for (t, &member) in self.members.iter().enumerate() {
                    if !sincere_shares[member].is_zero() {
                        choice[t] =
                            self.best_bid(state, item, member, &sincere[member], self.lattice.values(), &mut cache)?;
                    }
                }
                let bids = with_choice(&choice);
                let value = self.evaluate(state, item, &sincere_shares, &bids, &mut cache)?;
                if value > best_value {
                    best_value = value;
                    best_choice = choice;
                }
            }
            BidDependence::Positivity => {
                let positive = self.lattice.positive();
                let representative = positive[0].clone();
                for pattern in 0u32..(1 << self.members.len()) {
                    let mut choice: Vec<Rational> = (0..self.members.len())
                        .map(|t| {
                            if pattern & (1 << t) != 0 {
                                representative.clone()
                            } else {
                                Rational::zero()
                            }
                        })
                        .collect();
                    let shares = self.mechanism.round_probabilities(&view, &with_choice(&choice));
                    for (t, &member) in self.members.iter().enumerate() {
                        if pattern & (1 << t) == 0 {
                            continue;
                        }
                        let sincere_here = &sincere[member];
                        choice[t] = if shares[member].is_zero() {
                            if *sincere_here > Rational::zero() {
                                sincere_here.clone()
                            } else {
                                representative.clone()
                            }
                        } else {
                            self.best_bid(state, item, member, sincere_here, positive, &mut cache)?
                        };
                    }
                    let bids = with_choice(&choice);
                    let value = self.evaluate(state, item, &shares, &bids, &mut cache)?;
                    if value > best_value {
                        best_value = value;
                        best_choice = choice;
                    }
                }
            }
            BidDependence::Full => {
                let values = self.lattice.values();
                let mut digits = vec![0usize; self.members.len()];
                loop {
                    let choice: Vec<Rational> = digits.iter().map(|&d| values[d].clone()).collect();
                    let bids = with_choice(&choice);
                    let shares = self.mechanism.round_probabilities(&view, &bids);
                    let value = self.evaluate(state, item, &shares, &bids, &mut cache)?;
                    if value > best_value {
                        best_value = value;
                        best_choice = choice;
                    }
                    let mut position = digits.len();
                    loop {
                        if position == 0 {
                            break;
                        }
                        position -= 1;
                        digits[position] += 1;
                        if digits[position] < values.len() {
                            break;
                        }
                        digits[position] = 0;
                    }
                    if digits.iter().all(|&d| d == 0) {
                        break;
                    }
                }
            }
        }

        self.memo.insert(
            key,
            Solved {
                value: best_value.clone(),
                choice: best_choice,
            },
        );
        Ok(best_value)
    }

    /// Records the chosen misreports along every branch the chosen bids can reach.
    fn extract(&self, state: &NodeState, strategy: &mut StrategyProfile) {
        let solved = &self.memo[&self.key(state)];
        let item = state.allocation.round();
        if item == self.problem.items() {
            return;
        }
        let mut bids = sincere_bids(self.problem, &state.allocation, item);
        for (t, &member) in self.members.iter().enumerate() {
            if solved.choice[t] != bids[member] {
                strategy
                    .set(member, state.allocation.clone(), solved.choice[t].clone())
                    .expect("lattice values are nonnegative");
                bids[member] = solved.choice[t].clone();
            }
        }
        let shares = self.mechanism.round_probabilities(&view_of(state), &bids);
        for (k, share) in shares.iter().enumerate() {
            if !share.is_zero() {
                self.extract(&Self::child_state(state, item, k, &bids[k]), strategy);
            }
        }
    }
}
