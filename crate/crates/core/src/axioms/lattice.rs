use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::model::Problem;
use crate::rational::{self, Rational};

/// Finite set of candidate declared marginals: zero, every true marginal
/// occurring in the problem, midpoints between consecutive values, and one
/// value above the largest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MisreportLattice {
    values: Vec<Rational>,
}

impl MisreportLattice {
    pub fn for_problem(problem: &Problem) -> Self {
        let mut base: BTreeSet<Rational> = BTreeSet::from([Rational::zero()]);
        for u in problem.utilities() {
            base.extend(u.marginals());
        }
        let sorted: Vec<Rational> = base.into_iter().collect();
        let mut values: BTreeSet<Rational> = sorted.iter().cloned().collect();
        for pair in sorted.windows(2) {
            values.insert((&pair[0] + &pair[1]) / rational::int(2));
        }
        let top = sorted.last().cloned().unwrap_or_else(Rational::zero);
        values.insert(top + Rational::one());
        MisreportLattice {
            values: values.into_iter().collect(),
        }
    }

    /// Ascending.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn positive(&self) -> &[Rational] {
        &self.values[1..]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, value: &Rational) -> bool {
        self.values.binary_search(value).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{fixture_problem, FixtureId};
    use crate::rational::{int, ratio};

    #[test]
    fn lattice_of_zero_one_problem() {
        let lattice = MisreportLattice::for_problem(&fixture_problem(FixtureId::T1));
        assert_eq!(lattice.values(), &[int(0), ratio(1, 2), int(1), int(2)]);
    }

    #[test]
    fn contains_every_sincere_marginal() {
        let problem = fixture_problem(FixtureId::T6b);
        let lattice = MisreportLattice::for_problem(&problem);
        for u in problem.utilities() {
            assert!(u.marginals().all(|d| lattice.contains(&d)));
        }
        assert_eq!(lattice.values().first(), Some(&int(0)));
        assert_eq!(lattice.values().last(), Some(&int(411)));
    }
}
