use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{classify, DomainFlags, ItemSet, Problem, UtilityFunction};
use crate::rational::{int, ratio, Rational};

/// A seeded random problem whose classified domain includes every flag set
/// in `target`. At most 3 agents and 5 items.
pub fn generate_random(target: &DomainFlags, agents: usize, items: usize, seed: u64) -> Result<Problem> {
    if !(1..=3).contains(&agents) || !(1..=5).contains(&items) {
        return Err(Error::Precondition(format!(
            "random problems need 1..=3 agents and 1..=5 items, got {agents} and {items}"
        )));
    }
    if target.positive_additive && !(target.additive && target.nonzero_marginals) {
        return Err(Error::Unsatisfiable(
            "positive_additive also requires additive and nonzero_marginals".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let utilities = if target.identical {
        vec![random_utility(target, items, &mut rng); agents]
    } else {
        (0..agents).map(|_| random_utility(target, items, &mut rng)).collect()
    };
    let problem = Problem::with_default_names(utilities)?;
    debug_assert!(classify(&problem).satisfies(target));
    Ok(problem)
}

fn random_utility(target: &DomainFlags, m: usize, rng: &mut ChaCha8Rng) -> UtilityFunction {
    let table = match (target.additive, target.zero_one_marginals) {
        (true, true) => {
            let values: Vec<Rational> = (0..m)
                .map(|_| {
                    if target.nonzero_marginals || rng.gen_bool(0.7) {
                        int(1)
                    } else {
                        int(0)
                    }
                })
                .collect();
            return UtilityFunction::additive(&values).expect("at most five items");
        }
        (true, false) => {
            let low = if target.nonzero_marginals { 1 } else { 0 };
            let values: Vec<Rational> = (0..m).map(|_| ratio(rng.gen_range(low..=10), 2)).collect();
            return UtilityFunction::additive(&values).expect("at most five items");
        }
        (false, true) => coverage(target.nonzero_marginals, m, rng),
        (false, false) => layered(target.nonzero_marginals, m, rng),
    };
    UtilityFunction::from_table(m, table).expect("table has 2^m entries")
}

/// Number of distinct colours in the bundle: every marginal is 0 or 1.
/// With non-zero marginals every item gets its own colour.
fn coverage(nonzero: bool, m: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let colours: Vec<usize> = (0..m)
        .map(|o| if nonzero { o } else { rng.gen_range(0..m.max(2) - 1) })
        .collect();
    ItemSet::all_subsets(m)
        .map(|bundle| {
            let mut seen: Vec<usize> = bundle.items().map(|o| colours[o]).collect();
            seen.sort_unstable();
            seen.dedup();
            int(seen.len() as i64)
        })
        .collect()
}

/// Each bundle is worth its best one-item-smaller subset plus a random
/// increment, so the table is monotone by construction.
fn layered(nonzero: bool, m: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let mut table = vec![int(0); 1 << m];
    // a subset's mask never exceeds its superset's, so index order is safe
    for bits in 1..(1usize << m) {
        let bundle = ItemSet::from_bits(bits as u32);
        let floor = bundle
            .items()
            .map(|o| table[bundle.without(o).index()].clone())
            .max()
            .expect("non-empty bundle");
        let low = if nonzero { 1 } else { 0 };
        // zero increments are common without the non-zero requirement
        let step = if !nonzero && rng.gen_bool(0.3) {
            0
        } else {
            rng.gen_range(low..=6)
        };
        table[bits] = floor + ratio(step, 2);
    }
    table
}
