//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Variables are nonnegative and the objective is maximized. Sizes here are
//! a few rows by a few thousand columns, so the tableau is kept dense.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    LessEq,
    Eq,
    GreaterEq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpConstraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Maximize `objective · x` subject to the constraints and `x ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    pub variables: usize,
    pub constraints: Vec<LpConstraint>,
    pub objective: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, assignment: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpProblem {
    pub fn new(variables: usize, objective: Vec<Rational>) -> Self {
        LpProblem {
            variables,
            constraints: Vec::new(),
            objective,
        }
    }

    pub fn constrain(&mut self, coefficients: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(LpConstraint {
            coefficients,
            relation,
            rhs,
        });
    }

    fn validate(&self) -> Result<()> {
        if self.objective.len() != self.variables {
            return Err(Error::Precondition(format!(
                "objective has {} coefficients for {} variables",
                self.objective.len(),
                self.variables
            )));
        }
        for (row, constraint) in self.constraints.iter().enumerate() {
            if constraint.coefficients.len() != self.variables {
                return Err(Error::Precondition(format!(
                    "constraint {row} has {} coefficients for {} variables",
                    constraint.coefficients.len(),
                    self.variables
                )));
            }
        }
        Ok(())
    }

    /// Whether `x` satisfies every constraint exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.variables
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs: Rational = c.coefficients.iter().zip(x).map(|(a, v)| a * v).sum();
                match c.relation {
                    Relation::LessEq => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                    Relation::GreaterEq => lhs >= c.rhs,
                }
            })
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    columns: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, row: usize, column: usize) {
        let pivot = self.rows[row][column].clone();
        for value in self.rows[row].iter_mut() {
            *value /= &pivot;
        }
        self.rhs[row] /= &pivot;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][column].is_zero() {
                continue;
            }
            let factor = self.rows[r][column].clone();
            for (value, p) in self.rows[r].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *value -= &factor * p;
                }
            }
            self.rhs[r] -= &factor * &pivot_rhs;
        }
        self.basis[row] = column;
    }

    /// Maximizes `cost · x` from the current basic feasible solution.
    fn maximize(&mut self, cost: &[Rational], allowed: &[bool]) -> Phase {
        loop {
            let entering = (0..self.columns).find(|&j| {
                allowed[j] && !self.basis.contains(&j) && {
                    let reduced: Rational = self
                        .rows
                        .iter()
                        .zip(&self.basis)
                        .map(|(row, &b)| &cost[b] * &row[j])
                        .sum();
                    cost[j] > reduced
                }
            });
            let Some(column) = entering else {
                return Phase::Optimal;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][column];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &leaving {
                    None => true,
                    Some((best_row, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*best_row])
                    }
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
            match leaving {
                Some((row, _)) => self.pivot(row, column),
                None => return Phase::Unbounded,
            }
        }
    }

    fn value_of(&self, column: usize) -> Rational {
        self.basis
            .iter()
            .position(|&b| b == column)
            .map_or_else(Rational::zero, |r| self.rhs[r].clone())
    }
}

pub fn lp_solve(lp: &LpProblem) -> Result<LpOutcome> {
    lp.validate()?;
    let n = lp.variables;
    let m = lp.constraints.len();

    // Column layout: originals, then one slack/surplus per inequality, then artificials.
    let inequalities = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
    let mut artificial_rows = Vec::new();
    let mut normalized = Vec::with_capacity(m);
    for c in &lp.constraints {
        let (coefficients, relation, rhs) = if c.rhs.is_negative() {
            let flipped = match c.relation {
                Relation::LessEq => Relation::GreaterEq,
                Relation::Eq => Relation::Eq,
                Relation::GreaterEq => Relation::LessEq,
            };
            (c.coefficients.iter().map(|a| -a).collect::<Vec<_>>(), flipped, -&c.rhs)
        } else {
            (c.coefficients.clone(), c.relation, c.rhs.clone())
        };
        normalized.push((coefficients, relation, rhs));
    }
    for (row, (_, relation, _)) in normalized.iter().enumerate() {
        if *relation != Relation::LessEq {
            artificial_rows.push(row);
        }
    }
    let first_artificial = n + inequalities;
    let columns = first_artificial + artificial_rows.len();

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut slack = n;
    for (row, (coefficients, relation, b)) in normalized.into_iter().enumerate() {
        let mut line = coefficients;
        line.resize(columns, Rational::zero());
        match relation {
            Relation::LessEq => {
                line[slack] = Rational::one();
                basis.push(slack);
                slack += 1;
            }
            Relation::GreaterEq => {
                line[slack] = -Rational::one();
                slack += 1;
            }
            Relation::Eq => {}
        }
        if relation != Relation::LessEq {
            let a = first_artificial + artificial_rows.iter().position(|&r| r == row).unwrap();
            line[a] = Rational::one();
            basis.push(a);
        }
        rows.push(line);
        rhs.push(b);
    }
    let mut tableau = Tableau {
        rows,
        rhs,
        basis,
        columns,
    };

    if !artificial_rows.is_empty() {
        let phase_one: Vec<Rational> = (0..columns)
            .map(|j| {
                if j >= first_artificial {
                    -Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        tableau.maximize(&phase_one, &vec![true; columns]);
        let infeasibility: Rational = (first_artificial..columns).map(|j| tableau.value_of(j)).sum();
        if infeasibility.is_positive() {
            return Ok(LpOutcome::Infeasible);
        }
        // Pivot zero-valued artificials out of the basis; drop rows that are redundant.
        let mut r = 0;
        while r < tableau.rows.len() {
            if tableau.basis[r] >= first_artificial {
                match (0..first_artificial).find(|&j| !tableau.rows[r][j].is_zero()) {
                    Some(column) => tableau.pivot(r, column),
                    None => {
                        tableau.rows.remove(r);
                        tableau.rhs.remove(r);
                        tableau.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let mut cost = lp.objective.clone();
    cost.resize(columns, Rational::zero());
    let allowed: Vec<bool> = (0..columns).map(|j| j < first_artificial).collect();
    match tableau.maximize(&cost, &allowed) {
        Phase::Unbounded => Ok(LpOutcome::Unbounded),
        Phase::Optimal => {
            let assignment: Vec<Rational> = (0..n).map(|j| tableau.value_of(j)).collect();
            let value = lp.objective_value(&assignment);
            Ok(LpOutcome::Optimal { value, assignment })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn ints(values: &[i64]) -> Vec<Rational> {
        values.iter().map(|&v| int(v)).collect()
    }

    #[test]
    fn single_bounded_variable() {
        let mut lp = LpProblem::new(1, ints(&[1]));
        lp.constrain(ints(&[1]), Relation::LessEq, int(1));
        lp.constrain(ints(&[1]), Relation::GreaterEq, int(0));
        assert_eq!(
            lp_solve(&lp).unwrap(),
            LpOutcome::Optimal {
                value: int(1),
                assignment: ints(&[1])
            }
        );
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18  →  36 at (2, 6)
        let mut lp = LpProblem::new(2, ints(&[3, 5]));
        lp.constrain(ints(&[1, 0]), Relation::LessEq, int(4));
        lp.constrain(ints(&[0, 2]), Relation::LessEq, int(12));
        lp.constrain(ints(&[3, 2]), Relation::LessEq, int(18));
        assert_eq!(
            lp_solve(&lp).unwrap(),
            LpOutcome::Optimal {
                value: int(36),
                assignment: ints(&[2, 6])
            }
        );
    }

    #[test]
    fn equality_and_fractional_optimum() {
        // max x + y, x + 3y = 2, 3x + y ≤ 2  →  x = y = 1/2
        let mut lp = LpProblem::new(2, ints(&[1, 1]));
        lp.constrain(ints(&[1, 3]), Relation::Eq, int(2));
        lp.constrain(ints(&[3, 1]), Relation::LessEq, int(2));
        assert_eq!(
            lp_solve(&lp).unwrap(),
            LpOutcome::Optimal {
                value: int(1),
                assignment: vec![ratio(1, 2), ratio(1, 2)]
            }
        );
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LpProblem::new(1, ints(&[1]));
        lp.constrain(ints(&[1]), Relation::LessEq, int(1));
        lp.constrain(ints(&[1]), Relation::GreaterEq, int(2));
        assert_eq!(lp_solve(&lp).unwrap(), LpOutcome::Infeasible);

        let mut lp = LpProblem::new(2, ints(&[1, 0]));
        lp.constrain(ints(&[-1, 1]), Relation::LessEq, int(1));
        assert_eq!(lp_solve(&lp).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_and_redundant_equalities() {
        // -x ≤ -1 (x ≥ 1), x + y = 3, 2x + 2y = 6; max y → x = 1, y = 2
        let mut lp = LpProblem::new(2, ints(&[0, 1]));
        lp.constrain(ints(&[-1, 0]), Relation::LessEq, int(-1));
        lp.constrain(ints(&[1, 1]), Relation::Eq, int(3));
        lp.constrain(ints(&[2, 2]), Relation::Eq, int(6));
        assert_eq!(
            lp_solve(&lp).unwrap(),
            LpOutcome::Optimal {
                value: int(2),
                assignment: ints(&[1, 2])
            }
        );
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let mut lp = LpProblem::new(2, ints(&[1, 1]));
        lp.constrain(ints(&[1]), Relation::LessEq, int(1));
        assert!(lp_solve(&lp).is_err());
    }

    /// Brute force for two variables: the optimum of a bounded LP lies on a
    /// vertex, i.e. the intersection of two active constraint lines
    /// (including the axes x = 0 and y = 0).
    fn vertex_oracle(lp: &LpProblem) -> Option<Rational> {
        let mut lines: Vec<(Rational, Rational, Rational)> = lp
            .constraints
            .iter()
            .map(|c| (c.coefficients[0].clone(), c.coefficients[1].clone(), c.rhs.clone()))
            .collect();
        lines.push((int(1), int(0), int(0)));
        lines.push((int(0), int(1), int(0)));
        let mut best: Option<Rational> = None;
        for a in 0..lines.len() {
            for b in a + 1..lines.len() {
                let (a1, b1, c1) = &lines[a];
                let (a2, b2, c2) = &lines[b];
                let det = a1 * b2 - a2 * b1;
                if det.is_zero() {
                    continue;
                }
                let x = (c1 * b2 - c2 * b1) / &det;
                let y = (a1 * c2 - a2 * c1) / &det;
                let point = vec![x, y];
                if lp.is_feasible(&point) {
                    let value = lp.objective_value(&point);
                    if best.as_ref().is_none_or(|b| value > *b) {
                        best = Some(value);
                    }
                }
            }
        }
        best
    }

    proptest! {
        #[test]
        fn matches_vertex_enumeration_on_bounded_problems(
            rows in proptest::collection::vec((1i64..6, 1i64..6, 1i64..20), 1..4),
            objective in (0i64..5, 0i64..5),
        ) {
            // positive coefficients with ≤ keep the region bounded and feasible
            let mut lp = LpProblem::new(2, ints(&[objective.0, objective.1]));
            for (a, b, c) in &rows {
                lp.constrain(ints(&[*a, *b]), Relation::LessEq, int(*c));
            }
            let LpOutcome::Optimal { value, assignment } = lp_solve(&lp).unwrap() else {
                panic!("bounded feasible problem");
            };
            prop_assert!(lp.is_feasible(&assignment));
            prop_assert_eq!(Some(value), vertex_oracle(&lp));
        }
    }
}
