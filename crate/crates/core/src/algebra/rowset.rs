use std::fmt;

use fixedbitset::FixedBitSet;

use super::AlgebraError;

/// The ambient set of row ids `0..size`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Universe {
    size: usize,
}

impl Universe {
    pub fn new(size: usize) -> Self {
        Universe { size }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn empty_set(&self) -> RowSet {
        RowSet::empty(*self)
    }

    pub fn full_set(&self) -> RowSet {
        let mut bits = FixedBitSet::with_capacity(self.size);
        bits.insert_range(..);
        RowSet { bits }
    }

    /// Builds a subset from row ids, rejecting ids outside the universe.
    pub fn set_of<I: IntoIterator<Item = usize>>(&self, rows: I) -> Result<RowSet, AlgebraError> {
        let mut set = self.empty_set();
        for row in rows {
            if row >= self.size {
                return Err(AlgebraError::RowOutOfRange { row, size: self.size });
            }
            set.bits.insert(row);
        }
        Ok(set)
    }
}

/// A subset of a [`Universe`], stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowSet {
    bits: FixedBitSet,
}

impl RowSet {
    pub fn empty(universe: Universe) -> Self {
        RowSet {
            bits: FixedBitSet::with_capacity(universe.size()),
        }
    }

    pub fn universe(&self) -> Universe {
        Universe::new(self.bits.len())
    }

    pub fn contains(&self, row: usize) -> bool {
        self.bits.contains(row)
    }

    pub(crate) fn insert(&mut self, row: usize) {
        self.bits.insert(row);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_subset(&self, other: &RowSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersects(&self, other: &RowSet) -> bool {
        !self.bits.is_disjoint(&other.bits)
    }

    pub fn union(&self, other: &RowSet) -> RowSet {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        RowSet { bits }
    }

    pub fn union_with(&mut self, other: &RowSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersection(&self, other: &RowSet) -> RowSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        RowSet { bits }
    }

    pub fn difference(&self, other: &RowSet) -> RowSet {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        RowSet { bits }
    }

    pub fn complement(&self) -> RowSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        RowSet { bits }
    }

    /// Least row id in the set.
    pub fn first(&self) -> Option<usize> {
        self.bits.minimum()
    }

    pub fn rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.rows().collect()
    }
}

impl fmt::Debug for RowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.rows()).finish()
    }
}
