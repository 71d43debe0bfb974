use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::Allocation;
use crate::rational::{self, Rational};

/// What a mechanism sees when item `round` arrives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MechanismState {
    pub round: usize,
    /// Allocation of the items that arrived before `round`.
    pub allocation: Allocation,
    /// Sum of the declared bids for the items each agent actually received.
    pub declared: Vec<Rational>,
}

impl MechanismState {
    pub fn initial(agents: usize) -> Self {
        MechanismState {
            round: 0,
            allocation: Allocation::empty(agents),
            declared: vec![Rational::zero(); agents],
        }
    }
}

/// How the per-round probabilities react to the current bids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BidDependence {
    /// Bids are ignored.
    None,
    /// Only which bids are positive matters.
    Positivity,
    /// Bid magnitudes are compared.
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mechanism {
    /// Uniform over positive bidders with minimum declared utility.
    MinimumLike,
    /// Uniform over all agents with minimum declared utility; bids ignored.
    MinimumUtility,
    /// Uniform over positive bidders.
    Like,
    /// Uniform over positive bidders holding the fewest items.
    BalancedLike,
    /// Uniform over positive bidders with the largest bid.
    MaximumLike,
    /// Uniform over all agents regardless of bids.
    Uniform,
    /// Every item goes to one agent.
    FixedAgent(usize),
    /// A uniformly drawn agent receives every item.
    RandomDictator,
    /// Minimum Like, except that inside a tie the lowest-index agent receives
    /// the given share and the others split the rest evenly. Pins the
    /// tie-break probability to an arbitrary value in `[0, 1]`.
    TieBiased(Rational),
    /// Lowest-index positive bidder takes the item. A deliberately unfair
    /// non-wasteful baseline.
    IndexLike,
}

impl Mechanism {
    /// The eight mechanisms of the model, with `fixed-agent` instantiated for every agent.
    pub fn builtins(agents: usize) -> Vec<Mechanism> {
        let mut all = vec![
            Mechanism::MinimumLike,
            Mechanism::MinimumUtility,
            Mechanism::Like,
            Mechanism::BalancedLike,
            Mechanism::MaximumLike,
            Mechanism::Uniform,
        ];
        all.extend((0..agents).map(Mechanism::FixedAgent));
        all.push(Mechanism::RandomDictator);
        all
    }

    pub fn builtin_non_wasteful() -> Vec<Mechanism> {
        vec![
            Mechanism::MinimumLike,
            Mechanism::Like,
            Mechanism::BalancedLike,
            Mechanism::MaximumLike,
        ]
    }

    /// Tie-biased variants pinning the tie-break share to 0, 1/2 and 1.
    pub fn tie_biased_family() -> Vec<Mechanism> {
        [rational::zero(), rational::ratio(1, 2), rational::one()]
            .into_iter()
            .map(Mechanism::TieBiased)
            .collect()
    }

    pub fn is_wasteful(&self) -> bool {
        matches!(
            self,
            Mechanism::MinimumUtility | Mechanism::Uniform | Mechanism::FixedAgent(_) | Mechanism::RandomDictator
        )
    }

    pub fn bid_dependence(&self) -> BidDependence {
        match self {
            Mechanism::MinimumLike
            | Mechanism::Like
            | Mechanism::BalancedLike
            | Mechanism::TieBiased(_)
            | Mechanism::IndexLike => BidDependence::Positivity,
            Mechanism::MaximumLike => BidDependence::Full,
            Mechanism::MinimumUtility | Mechanism::Uniform | Mechanism::FixedAgent(_) | Mechanism::RandomDictator => {
                BidDependence::None
            }
        }
    }

    /// Whether the accumulated declared utilities influence later rounds.
    pub fn uses_declared_utility(&self) -> bool {
        matches!(
            self,
            Mechanism::MinimumLike | Mechanism::MinimumUtility | Mechanism::TieBiased(_)
        )
    }

    pub fn validate(&self, agents: usize) -> Result<()> {
        match self {
            Mechanism::FixedAgent(agent) if *agent >= agents => Err(Error::Precondition(format!(
                "fixed-agent({}) needs at least {} agents",
                agent + 1,
                agent + 1
            ))),
            Mechanism::TieBiased(share) if *share < Rational::zero() || *share > Rational::one() => Err(
                Error::Precondition(format!("tie share {} is outside [0, 1]", rational::format(share))),
            ),
            _ => Ok(()),
        }
    }

    /// Probability of each agent receiving the current item. Always sums to one.
    pub fn round_probabilities(&self, state: &MechanismState, bids: &[Rational]) -> Vec<Rational> {
        let agents = bids.len();
        let everyone: Vec<usize> = (0..agents).collect();
        let positive: Vec<usize> = everyone
            .iter()
            .copied()
            .filter(|&i| bids[i] > Rational::zero())
            .collect();
        let likers = if positive.is_empty() {
            everyone.clone()
        } else {
            positive.clone()
        };
        match self {
            Mechanism::MinimumLike => uniform_over(agents, &argmin_by(&likers, |i| &state.declared[i])),
            Mechanism::MinimumUtility => uniform_over(agents, &argmin_by(&everyone, |i| &state.declared[i])),
            Mechanism::Like => uniform_over(agents, &likers),
            Mechanism::BalancedLike => {
                let counts: Vec<usize> = everyone.iter().map(|&i| state.allocation.bundle(i).len()).collect();
                uniform_over(agents, &argmin_by(&likers, |i| &counts[i]))
            }
            Mechanism::MaximumLike => {
                let winners = argmin_by(&likers, |i| std::cmp::Reverse(&bids[i]));
                uniform_over(agents, &winners)
            }
            Mechanism::Uniform => uniform_over(agents, &everyone),
            Mechanism::FixedAgent(agent) => uniform_over(agents, &[*agent]),
            Mechanism::RandomDictator => match state.allocation.owner_of(0) {
                Some(dictator) if state.round > 0 => uniform_over(agents, &[dictator]),
                _ => uniform_over(agents, &everyone),
            },
            Mechanism::TieBiased(share) => {
                let tied = argmin_by(&likers, |i| &state.declared[i]);
                let mut probabilities = vec![Rational::zero(); agents];
                if tied.len() == 1 {
                    probabilities[tied[0]] = Rational::one();
                } else {
                    let rest = (Rational::one() - share) / Rational::from_integer((tied.len() - 1).into());
                    probabilities[tied[0]] = share.clone();
                    for &i in &tied[1..] {
                        probabilities[i] = rest.clone();
                    }
                }
                probabilities
            }
            Mechanism::IndexLike => uniform_over(agents, &likers[..1]),
        }
    }
}

/// All members whose key equals the minimum key, in index order.
fn argmin_by<K: Ord, F: Fn(usize) -> K>(members: &[usize], key: F) -> Vec<usize> {
    let Some(best) = members.iter().map(|&i| key(i)).min() else {
        return Vec::new();
    };
    members.iter().copied().filter(|&i| key(i) == best).collect()
}

fn uniform_over(agents: usize, members: &[usize]) -> Vec<Rational> {
    let mut probabilities = vec![Rational::zero(); agents];
    let share = Rational::new(1.into(), members.len().into());
    for &i in members {
        probabilities[i] = share.clone();
    }
    probabilities
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mechanism::MinimumLike => f.write_str("minimum-like"),
            Mechanism::MinimumUtility => f.write_str("minimum-utility"),
            Mechanism::Like => f.write_str("like"),
            Mechanism::BalancedLike => f.write_str("balanced-like"),
            Mechanism::MaximumLike => f.write_str("maximum-like"),
            Mechanism::Uniform => f.write_str("uniform"),
            Mechanism::FixedAgent(agent) => write!(f, "fixed-agent({})", agent + 1),
            Mechanism::RandomDictator => f.write_str("random-dictator"),
            Mechanism::TieBiased(share) => write!(f, "tie-biased({})", rational::format(share)),
            Mechanism::IndexLike => f.write_str("index-like"),
        }
    }
}

impl FromStr for Mechanism {
    type Err = Error;

    /// Accepts the display names; agent arguments are 1-based.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let unknown = || Error::UnknownMechanism(text.to_string());
        let (name, argument) = match text.split_once('(') {
            Some((name, rest)) => (name, Some(rest.strip_suffix(')').ok_or_else(unknown)?)),
            None => (text, None),
        };
        let mechanism = match (name, argument) {
            ("minimum-like", None) => Mechanism::MinimumLike,
            ("minimum-utility", None) => Mechanism::MinimumUtility,
            ("like", None) => Mechanism::Like,
            ("balanced-like", None) => Mechanism::BalancedLike,
            ("maximum-like", None) => Mechanism::MaximumLike,
            ("uniform", None) => Mechanism::Uniform,
            ("random-dictator", None) => Mechanism::RandomDictator,
            ("index-like", None) => Mechanism::IndexLike,
            ("fixed-agent", Some(agent)) => {
                let agent: usize = agent.trim().parse().map_err(|_| unknown())?;
                if agent == 0 {
                    return Err(unknown());
                }
                Mechanism::FixedAgent(agent - 1)
            }
            ("tie-biased", Some(share)) => {
                let share = rational::parse(share)?;
                let mechanism = Mechanism::TieBiased(share);
                mechanism.validate(usize::MAX)?;
                mechanism
            }
            _ => return Err(unknown()),
        };
        Ok(mechanism)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn state(declared: &[i64]) -> MechanismState {
        MechanismState {
            round: 1,
            allocation: Allocation::from_owners(declared.len(), &[0]),
            declared: declared.iter().map(|&v| int(v)).collect(),
        }
    }

    fn bids(values: &[i64]) -> Vec<Rational> {
        values.iter().map(|&v| int(v)).collect()
    }

    #[test]
    fn minimum_like_restricts_to_positive_bidders() {
        let probs = Mechanism::MinimumLike.round_probabilities(&MechanismState::initial(2), &bids(&[0, 1]));
        assert_eq!(probs, vec![int(0), int(1)]);
    }

    #[test]
    fn minimum_like_falls_back_to_everyone() {
        let probs = Mechanism::MinimumLike.round_probabilities(&MechanismState::initial(2), &bids(&[0, 0]));
        assert_eq!(probs, vec![ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn minimum_utility_ignores_bids() {
        for b in [[0, 0], [5, 0], [0, 7], [2, 2]] {
            let probs = Mechanism::MinimumUtility.round_probabilities(&state(&[1, 3]), &bids(&b));
            assert_eq!(probs, vec![int(1), int(0)]);
        }
    }

    #[test]
    fn maximum_like_and_balanced_like() {
        let s = state(&[0, 0, 0]);
        assert_eq!(
            Mechanism::MaximumLike.round_probabilities(&s, &bids(&[2, 3, 3])),
            vec![int(0), ratio(1, 2), ratio(1, 2)]
        );
        // agent 0 holds item 0
        assert_eq!(
            Mechanism::BalancedLike.round_probabilities(&s, &bids(&[1, 1, 0])),
            vec![int(0), int(1), int(0)]
        );
    }

    #[test]
    fn tie_biased_shares() {
        let probs = Mechanism::TieBiased(ratio(1, 3)).round_probabilities(&state(&[0, 0, 0]), &bids(&[1, 1, 1]));
        assert_eq!(probs, vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
        let probs = Mechanism::TieBiased(int(1)).round_probabilities(&state(&[0, 0, 0]), &bids(&[0, 1, 1]));
        assert_eq!(probs, vec![int(0), int(1), int(0)]);
    }

    #[test]
    fn random_dictator_follows_first_owner() {
        assert_eq!(
            Mechanism::RandomDictator.round_probabilities(&MechanismState::initial(2), &bids(&[1, 1])),
            vec![ratio(1, 2), ratio(1, 2)]
        );
        assert_eq!(
            Mechanism::RandomDictator.round_probabilities(&state(&[1, 0]), &bids(&[0, 9])),
            vec![int(1), int(0)]
        );
    }

    #[test]
    fn names_round_trip() {
        let mut all = Mechanism::builtins(3);
        all.extend(Mechanism::tie_biased_family());
        all.push(Mechanism::IndexLike);
        for mechanism in all {
            assert_eq!(mechanism.to_string().parse::<Mechanism>().unwrap(), mechanism);
        }
        assert!("fixed-agent(0)".parse::<Mechanism>().is_err());
        assert!("tie-biased(3/2)".parse::<Mechanism>().is_err());
        assert!("best".parse::<Mechanism>().is_err());
    }

    fn mechanisms(agents: usize) -> Vec<Mechanism> {
        let mut all = Mechanism::builtins(agents);
        all.extend(Mechanism::tie_biased_family());
        all.push(Mechanism::IndexLike);
        all
    }

    proptest! {
        #[test]
        fn probabilities_are_normalized_and_respect_non_wastefulness(
            bid_values in proptest::collection::vec(0i64..3, 3),
            declared in proptest::collection::vec(0i64..4, 3),
            owner in 0usize..3,
        ) {
            let s = MechanismState {
                round: 1,
                allocation: Allocation::from_owners(3, &[owner]),
                declared: declared.iter().map(|&v| int(v)).collect(),
            };
            let b = bids(&bid_values);
            for mechanism in mechanisms(3) {
                let probs = mechanism.round_probabilities(&s, &b);
                prop_assert!(probs.iter().all(|p| *p >= Rational::zero()));
                prop_assert!(probs.iter().sum::<Rational>().is_one());
                if !mechanism.is_wasteful() && b.iter().any(|x| *x > Rational::zero()) {
                    for i in 0..3 {
                        if b[i].is_zero() {
                            prop_assert!(probs[i].is_zero(), "{} gave mass to a zero bidder", mechanism);
                        }
                    }
                }
            }
        }

        #[test]
        fn declared_dependence_flags_are_honest(
            pattern in proptest::collection::vec(any::<bool>(), 3),
            scale in proptest::collection::vec(1i64..50, 3),
            declared in proptest::collection::vec(0i64..4, 3),
        ) {
            let s = MechanismState {
                round: 1,
                allocation: Allocation::from_owners(3, &[0]),
                declared: declared.iter().map(|&v| int(v)).collect(),
            };
            let unit: Vec<Rational> = pattern.iter().map(|&p| if p { int(1) } else { int(0) }).collect();
            let scaled: Vec<Rational> = pattern.iter().zip(&scale).map(|(&p, &k)| if p { ratio(k, 7) } else { int(0) }).collect();
            let zeros = vec![int(0); 3];
            for mechanism in mechanisms(3) {
                match mechanism.bid_dependence() {
                    BidDependence::None => prop_assert_eq!(
                        mechanism.round_probabilities(&s, &unit),
                        mechanism.round_probabilities(&s, &zeros)
                    ),
                    BidDependence::Positivity => prop_assert_eq!(
                        mechanism.round_probabilities(&s, &unit),
                        mechanism.round_probabilities(&s, &scaled)
                    ),
                    BidDependence::Full => {}
                }
            }
        }
    }
}
