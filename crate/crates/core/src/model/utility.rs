use std::fmt;

use num_traits::Zero;

use super::item_set::{ItemSet, MAX_ITEMS};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Bundle utility of one agent, stored as an explicit table indexed by the
/// bundle's bitmask. Additive utilities are expanded into the same table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UtilityFunction {
    m: usize,
    table: Vec<Rational>,
}

/// Why a table is not a monotone utility with `u(∅) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonotoneViolation {
    EmptyNotZero(Rational),
    /// `smaller ⊂ larger` but `u(smaller) > u(larger)`.
    Decreasing {
        smaller: ItemSet,
        larger: ItemSet,
    },
}

impl UtilityFunction {
    /// Builds a table from values listed in bitmask order (`table[B.index()] = u(B)`).
    pub fn from_table(m: usize, table: Vec<Rational>) -> Result<Self> {
        check_item_count(m)?;
        if table.len() != 1 << m {
            return Err(Error::Schema(format!(
                "a utility table over {m} items needs {} entries, got {}",
                1 << m,
                table.len()
            )));
        }
        Ok(UtilityFunction { m, table })
    }

    /// Builds a table from `(bundle, value)` pairs. Every non-empty bundle must
    /// be listed exactly once; the empty bundle may be omitted.
    pub fn from_entries<I>(item_names: &[String], entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ItemSet, Rational)>,
    {
        let m = item_names.len();
        check_item_count(m)?;
        let mut table: Vec<Option<Rational>> = vec![None; 1 << m];
        for (bundle, value) in entries {
            if bundle.index() >= table.len() {
                return Err(Error::Schema(format!("bundle {bundle:?} mentions undeclared items")));
            }
            let slot = &mut table[bundle.index()];
            if slot.is_some() {
                return Err(Error::Schema(format!(
                    "bundle {} listed twice",
                    describe(bundle, item_names)
                )));
            }
            *slot = Some(value);
        }
        if table[0].is_none() {
            table[0] = Some(Rational::zero());
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(bits, value)| {
                value.ok_or_else(|| {
                    Error::Schema(format!(
                        "utility table is missing bundle {}",
                        describe(ItemSet::from_bits(bits as u32), item_names)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(UtilityFunction { m, table })
    }

    /// Expands per-item values into the full additive table.
    pub fn additive(values: &[Rational]) -> Result<Self> {
        let m = values.len();
        check_item_count(m)?;
        let mut table = vec![Rational::zero(); 1 << m];
        for bits in 1..(1usize << m) {
            let lowest = bits.trailing_zeros() as usize;
            table[bits] = &table[bits & (bits - 1)] + &values[lowest];
        }
        Ok(UtilityFunction { m, table })
    }

    pub fn item_count(&self) -> usize {
        self.m
    }

    pub fn value(&self, bundle: ItemSet) -> &Rational {
        &self.table[bundle.index()]
    }

    /// `u({item})`.
    pub fn item_value(&self, item: usize) -> &Rational {
        self.value(ItemSet::singleton(item))
    }

    /// `u(bundle ∪ {item}) − u(bundle)`; the item must not already be in the bundle.
    pub fn marginal(&self, bundle: ItemSet, item: usize) -> Result<Rational> {
        if item >= self.m {
            return Err(Error::Precondition(format!(
                "item {item} is not among the {} items",
                self.m
            )));
        }
        if bundle.contains(item) {
            return Err(Error::Precondition(format!(
                "item {item} is already in bundle {bundle:?}"
            )));
        }
        Ok(self.value(bundle.with(item)) - self.value(bundle))
    }

    /// Checks `u(∅) = 0` and that every single-item extension is non-decreasing,
    /// which together imply monotonicity under inclusion. The witness is the
    /// first decreasing extension in bitmask order.
    pub fn validate_monotone(&self) -> std::result::Result<(), MonotoneViolation> {
        if !self.table[0].is_zero() {
            return Err(MonotoneViolation::EmptyNotZero(self.table[0].clone()));
        }
        for smaller in ItemSet::all_subsets(self.m) {
            for item in 0..self.m {
                if smaller.contains(item) {
                    continue;
                }
                let larger = smaller.with(item);
                if self.value(smaller) > self.value(larger) {
                    return Err(MonotoneViolation::Decreasing { smaller, larger });
                }
            }
        }
        Ok(())
    }

    pub fn is_additive(&self) -> bool {
        ItemSet::all_subsets(self.m).all(|bundle| {
            let sum: Rational = bundle.items().map(|o| self.item_value(o).clone()).sum();
            &sum == self.value(bundle)
        })
    }

    /// Every `(bundle, item)` marginal with `item ∉ bundle`.
    pub fn marginals(&self) -> impl Iterator<Item = Rational> + '_ {
        ItemSet::all_subsets(self.m).flat_map(move |bundle| {
            (0..self.m)
                .filter(move |&o| !bundle.contains(o))
                .map(move |o| self.value(bundle.with(o)) - self.value(bundle))
        })
    }

    pub fn table(&self) -> &[Rational] {
        &self.table
    }
}

impl fmt::Debug for UtilityFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries = self.table.iter().map(rational::format);
        f.debug_list().entries(entries).finish()
    }
}

fn check_item_count(m: usize) -> Result<()> {
    if m == 0 || m > MAX_ITEMS {
        return Err(Error::Schema(format!(
            "item count must be between 1 and {MAX_ITEMS}, got {m}"
        )));
    }
    Ok(())
}

pub(crate) fn describe(bundle: ItemSet, item_names: &[String]) -> String {
    if bundle.is_empty() {
        return "∅".to_string();
    }
    let names: Vec<&str> = bundle
        .items()
        .map(|o| item_names.get(o).map(String::as_str).unwrap_or("?"))
        .collect();
    format!("{{{}}}", names.join(","))
}
