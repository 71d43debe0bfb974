use super::item_set::ItemSet;
use crate::error::{Error, Result};

/// `n` pairwise disjoint bundles. The items they cover are always a prefix
/// `O_j` of the arrival order, where `j` is the round the allocation belongs to.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Allocation {
    bundles: Vec<ItemSet>,
}

impl Allocation {
    pub fn empty(agents: usize) -> Self {
        Allocation {
            bundles: vec![ItemSet::EMPTY; agents],
        }
    }

    /// Checks disjointness and that the bundles cover exactly `O_round`.
    pub fn new(bundles: Vec<ItemSet>, round: usize) -> Result<Self> {
        if bundles.is_empty() {
            return Err(Error::Schema("an allocation needs at least one bundle".into()));
        }
        let mut covered = ItemSet::EMPTY;
        for bundle in &bundles {
            if !covered.is_disjoint(*bundle) {
                return Err(Error::Schema(format!("bundles overlap in {bundles:?}")));
            }
            covered = covered.union(*bundle);
        }
        if covered != ItemSet::prefix(round) {
            return Err(Error::Schema(format!(
                "bundles {bundles:?} do not cover exactly the first {round} items"
            )));
        }
        Ok(Allocation { bundles })
    }

    /// `owners[j]` receives item `j`.
    pub fn from_owners(agents: usize, owners: &[usize]) -> Self {
        let mut allocation = Allocation::empty(agents);
        for (item, &owner) in owners.iter().enumerate() {
            allocation.bundles[owner] = allocation.bundles[owner].with(item);
        }
        allocation
    }

    pub fn agents(&self) -> usize {
        self.bundles.len()
    }

    pub fn bundle(&self, agent: usize) -> ItemSet {
        self.bundles[agent]
    }

    pub fn bundles(&self) -> &[ItemSet] {
        &self.bundles
    }

    pub fn covered(&self) -> ItemSet {
        self.bundles.iter().fold(ItemSet::EMPTY, |acc, b| acc.union(*b))
    }

    /// Number of items allocated so far.
    pub fn round(&self) -> usize {
        self.covered().len()
    }

    pub fn owner_of(&self, item: usize) -> Option<usize> {
        self.bundles.iter().position(|b| b.contains(item))
    }

    pub fn give(&self, item: usize, agent: usize) -> Self {
        let mut next = self.clone();
        next.bundles[agent] = next.bundles[agent].with(item);
        next
    }

    /// Same allocation restricted to the first `j` items.
    pub fn restrict(&self, j: usize) -> Self {
        let prefix = ItemSet::prefix(j);
        Allocation {
            bundles: self
                .bundles
                .iter()
                .map(|b| ItemSet::from_bits(b.bits() & prefix.bits()))
                .collect(),
        }
    }

    /// Exchanges the bundles of two agents.
    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let mut next = self.clone();
        next.bundles.swap(a, b);
        next
    }
}
