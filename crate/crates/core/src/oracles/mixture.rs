use crate::error::{Error, Result};
use crate::rational::Rational;

const MAX_PROFILES: usize = 8;
const MAX_AGENTS: usize = 3;
const MAX_DENOMINATOR: i64 = 24;

/// Grid search for a mixture of at most three deterministic profiles, with
/// weights `k/d` for `d ≤ 24`, that weakly dominates `profile` and strictly
/// improves some coordinate.
///
/// Only positive answers are certificates; `false` means the grid holds no
/// dominating mixture, not that none exists.
pub fn mixture_dominance_oracle(profile: &[Rational], deterministic: &[Vec<Rational>]) -> Result<bool> {
    if deterministic.len() > MAX_PROFILES || profile.len() > MAX_AGENTS {
        return Err(Error::Capacity {
            what: "mixture dominance grid",
            needed: deterministic.len().max(profile.len()) as u128,
            cap: MAX_PROFILES as u128,
        });
    }
    // Clear denominators once so the grid runs on machine integers.
    let Some((target, points)) = integer_form(profile, deterministic) else {
        return Ok(false);
    };
    let count = points.len();
    let mut subsets: Vec<Vec<usize>> = (0..count).map(|a| vec![a]).collect();
    for a in 0..count {
        for b in a + 1..count {
            subsets.push(vec![a, b]);
            for c in b + 1..count {
                subsets.push(vec![a, b, c]);
            }
        }
    }
    for subset in &subsets {
        for denominator in 1..=MAX_DENOMINATOR {
            let scaled: Vec<i128> = target.iter().map(|&t| t * denominator as i128).collect();
            for weights in compositions(denominator, subset.len()) {
                let mut weakly = true;
                let mut strictly = false;
                for (i, t) in scaled.iter().enumerate() {
                    let mixed: i128 = subset
                        .iter()
                        .zip(&weights)
                        .map(|(&p, &w)| points[p][i] * w as i128)
                        .sum();
                    weakly &= mixed >= *t;
                    strictly |= mixed > *t;
                }
                if weakly && strictly {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

type IntegerForm = (Vec<i128>, Vec<Vec<i128>>);

/// Rescales every value by the common denominator. `None` only when a value
/// exceeds the range that keeps the grid sums exact, which the callers'
/// instance sizes never reach; treated as "no certificate found".
fn integer_form(profile: &[Rational], deterministic: &[Vec<Rational>]) -> Option<IntegerForm> {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let all = profile.iter().chain(deterministic.iter().flatten());
    let lcm = all.fold(num_bigint::BigInt::from(1), |acc, v| acc.lcm(v.denom()));
    let convert = |v: &Rational| -> Option<i128> {
        let n = (v.numer() * (&lcm / v.denom())).to_i64()?;
        Some(n as i128)
    };
    let target = profile.iter().map(convert).collect::<Option<Vec<_>>>()?;
    let points = deterministic
        .iter()
        .map(|p| p.iter().map(convert).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    Some((target, points))
}

/// Ordered ways of writing `total` as `parts` positive integers.
fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (1..total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}
