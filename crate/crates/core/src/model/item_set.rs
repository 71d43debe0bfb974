use std::fmt;

/// Largest item count for which explicit bundle tables are kept.
pub const MAX_ITEMS: usize = 16;

/// Bitmask over item indices `0..m`. Bit `j` set means item `j` is present.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemSet(u32);

impl ItemSet {
    pub const EMPTY: ItemSet = ItemSet(0);

    pub fn from_bits(bits: u32) -> Self {
        ItemSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// The first `j` items, `O_j`.
    pub fn prefix(j: usize) -> Self {
        debug_assert!(j <= MAX_ITEMS);
        ItemSet(((1u64 << j) - 1) as u32)
    }

    pub fn singleton(item: usize) -> Self {
        ItemSet(1 << item)
    }

    pub fn from_items<I: IntoIterator<Item = usize>>(items: I) -> Self {
        items.into_iter().fold(ItemSet::EMPTY, |set, item| set.with(item))
    }

    pub fn contains(self, item: usize) -> bool {
        self.0 & (1 << item) != 0
    }

    pub fn with(self, item: usize) -> Self {
        ItemSet(self.0 | (1 << item))
    }

    pub fn without(self, item: usize) -> Self {
        ItemSet(self.0 & !(1 << item))
    }

    pub fn union(self, other: ItemSet) -> Self {
        ItemSet(self.0 | other.0)
    }

    pub fn is_disjoint(self, other: ItemSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: ItemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Items in increasing index order.
    pub fn items(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |j| bits & (1 << j) != 0)
    }

    /// Every subset of `O_m`, in increasing bitmask order (subsets before supersets).
    pub fn all_subsets(m: usize) -> impl Iterator<Item = ItemSet> {
        (0..(1u32 << m)).map(ItemSet)
    }
}

impl fmt::Debug for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.items()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_operations() {
        let set = ItemSet::from_items([0, 2]);
        assert!(set.contains(0) && set.contains(2) && !set.contains(1));
        assert_eq!(set.len(), 2);
        assert_eq!(set.with(1), ItemSet::prefix(3));
        assert_eq!(set.without(0), ItemSet::singleton(2));
        assert!(ItemSet::singleton(2).is_subset(set));
        assert!(ItemSet::singleton(1).is_disjoint(set));
        assert_eq!(set.items().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(ItemSet::all_subsets(3).count(), 8);
        assert_eq!(ItemSet::prefix(0), ItemSet::EMPTY);
    }
}
