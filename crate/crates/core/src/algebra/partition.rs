use rustc_hash::FxHashMap;

use super::{AlgebraError, RowSet, Universe};

/// A finite field of sets over a [`Universe`], stored as its atom partition.
///
/// Blocks are the atoms. They are kept in canonical order (sorted by least
/// row id) and every element of the algebra is a union of blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionAlgebra {
    universe: Universe,
    block_of: Vec<u32>,
    blocks: Vec<Vec<u32>>,
}

impl PartitionAlgebra {
    /// Builds the partition whose blocks are the classes of equal labels.
    ///
    /// Labels are arbitrary; block ids are reassigned by first occurrence, which
    /// is the canonical order.
    pub fn from_labels<L>(universe: Universe, labels: &[L]) -> Result<Self, AlgebraError>
    where
        L: Copy + Eq + std::hash::Hash,
    {
        if labels.len() != universe.size() {
            return Err(AlgebraError::LabelCount {
                labels: labels.len(),
                size: universe.size(),
            });
        }
        let mut ids: FxHashMap<L, u32> = FxHashMap::default();
        let mut block_of = Vec::with_capacity(labels.len());
        let mut blocks: Vec<Vec<u32>> = Vec::new();
        for (row, label) in labels.iter().enumerate() {
            let next = ids.len() as u32;
            let id = *ids.entry(*label).or_insert(next);
            if id == next {
                blocks.push(Vec::new());
            }
            blocks[id as usize].push(row as u32);
            block_of.push(id);
        }
        Ok(PartitionAlgebra {
            universe,
            block_of,
            blocks,
        })
    }

    /// Builds an algebra from an explicit list of atoms, checking the partition laws.
    pub fn from_blocks(universe: Universe, blocks: &[RowSet]) -> Result<Self, AlgebraError> {
        let mut labels = vec![u32::MAX; universe.size()];
        for (id, block) in blocks.iter().enumerate() {
            if block.universe() != universe {
                return Err(AlgebraError::UniverseMismatch {
                    left: block.universe().size(),
                    right: universe.size(),
                });
            }
            if block.is_empty() {
                return Err(AlgebraError::InvalidPartition(format!("block {id} is empty")));
            }
            for row in block.rows() {
                if labels[row] != u32::MAX {
                    return Err(AlgebraError::InvalidPartition(format!(
                        "row {row} lies in blocks {} and {id}",
                        labels[row]
                    )));
                }
                labels[row] = id as u32;
            }
        }
        if let Some(row) = labels.iter().position(|&l| l == u32::MAX) {
            return Err(AlgebraError::InvalidPartition(format!(
                "row {row} is not covered by any block"
            )));
        }
        Self::from_labels(universe, &labels)
    }

    /// The two-element algebra `{0, 1}` (one block), or the degenerate
    /// one-element algebra when the universe is empty.
    pub fn trivial(universe: Universe) -> Self {
        Self::from_labels(universe, &vec![0u8; universe.size()]).expect("label count matches")
    }

    /// The full power set: one block per row.
    pub fn discrete(universe: Universe) -> Self {
        let labels: Vec<usize> = (0..universe.size()).collect();
        Self::from_labels(universe, &labels).expect("label count matches")
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn atom_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block id of each row.
    pub fn labels(&self) -> &[u32] {
        &self.block_of
    }

    pub fn block_of(&self, row: usize) -> usize {
        self.block_of[row] as usize
    }

    /// Rows of block `id`, ascending.
    pub fn block_rows(&self, id: usize) -> &[u32] {
        &self.blocks[id]
    }

    pub fn block(&self, id: usize) -> RowSet {
        let mut set = self.universe.empty_set();
        for &row in &self.blocks[id] {
            set.insert(row as usize);
        }
        set
    }

    pub fn blocks(&self) -> Vec<RowSet> {
        (0..self.atom_count()).map(|id| self.block(id)).collect()
    }

    /// The element made of the blocks whose bits are set in `mask`.
    pub fn element_from_mask(&self, mask: u64) -> RowSet {
        let mut set = self.universe.empty_set();
        for id in (0..self.atom_count()).filter(|id| mask >> id & 1 == 1) {
            for &row in &self.blocks[id] {
                set.insert(row as usize);
            }
        }
        set
    }

    /// Whether `set` is a union of blocks, i.e. an element of this algebra.
    pub fn contains_element(&self, set: &RowSet) -> bool {
        set.universe() == self.universe
            && self.blocks.iter().all(|rows| {
                let inside = set.contains(rows[0] as usize);
                rows.iter().all(|&r| set.contains(r as usize) == inside)
            })
    }

    /// Ids of the blocks that meet `set`.
    pub fn blocks_meeting(&self, set: &RowSet) -> Vec<usize> {
        let mut hit = vec![false; self.atom_count()];
        for row in set.rows() {
            hit[self.block_of[row] as usize] = true;
        }
        hit.iter()
            .enumerate()
            .filter_map(|(id, &h)| h.then_some(id))
            .collect()
    }

    /// Ids of the blocks contained in `set`.
    pub fn blocks_inside(&self, set: &RowSet) -> Vec<usize> {
        (0..self.atom_count())
            .filter(|&id| self.blocks[id].iter().all(|&r| set.contains(r as usize)))
            .collect()
    }

    /// Regularity in the ambient power set. Every finite subalgebra is regular
    /// because all of its suprema are finite unions.
    pub fn is_regular(&self) -> bool {
        true
    }
}

/// Generates the field of sets spanned by `generators`.
///
/// Rows with the same membership pattern across all generators fall in the
/// same block; the generated algebra is exactly the unions of those blocks.
pub fn generate_subalgebra(
    universe: Universe,
    generators: &[RowSet],
) -> Result<PartitionAlgebra, AlgebraError> {
    let mut labels = vec![0u32; universe.size()];
    for generator in generators {
        if generator.universe() != universe {
            return Err(AlgebraError::UniverseMismatch {
                left: generator.universe().size(),
                right: universe.size(),
            });
        }
        let mut refine: FxHashMap<(u32, bool), u32> = FxHashMap::default();
        for (row, label) in labels.iter_mut().enumerate() {
            let key = (*label, generator.contains(row));
            let next = refine.len() as u32;
            *label = *refine.entry(key).or_insert(next);
        }
    }
    PartitionAlgebra::from_labels(universe, &labels)
}

/// Certificate that `C ≤ A`: for every block of the finer algebra, the block of
/// the coarser one containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubalgebraWitness {
    pub refinement_map: Vec<usize>,
}

impl SubalgebraWitness {
    /// Re-checks that every coarse block is exactly the union of the fine
    /// blocks mapped to it.
    pub fn validate(&self, coarse: &PartitionAlgebra, fine: &PartitionAlgebra) -> bool {
        if self.refinement_map.len() != fine.atom_count() || coarse.universe() != fine.universe() {
            return false;
        }
        let mut unions = vec![coarse.universe().empty_set(); coarse.atom_count()];
        for (fine_id, &coarse_id) in self.refinement_map.iter().enumerate() {
            if coarse_id >= coarse.atom_count() {
                return false;
            }
            unions[coarse_id].union_with(&fine.block(fine_id));
        }
        unions
            .iter()
            .enumerate()
            .all(|(id, u)| *u == coarse.block(id))
    }

    /// `C ≤* A`: regular, and every element of `A` has a least element of `C`
    /// above it. Both hold for every finite subalgebra; the least upper element
    /// is [`atom_projection`].
    pub fn sits_nicely(&self) -> bool {
        true
    }
}

/// Decides `C ≤ A`. Returns `Ok(None)` when some block of `C` is not a union
/// of blocks of `A`.
pub fn is_subalgebra(
    coarse: &PartitionAlgebra,
    fine: &PartitionAlgebra,
) -> Result<Option<SubalgebraWitness>, AlgebraError> {
    if coarse.universe() != fine.universe() {
        return Err(AlgebraError::UniverseMismatch {
            left: coarse.universe().size(),
            right: fine.universe().size(),
        });
    }
    let mut refinement_map = Vec::with_capacity(fine.atom_count());
    for id in 0..fine.atom_count() {
        let rows = fine.block_rows(id);
        let target = coarse.block_of(rows[0] as usize);
        if rows.iter().any(|&r| coarse.block_of(r as usize) != target) {
            return Ok(None);
        }
        refinement_map.push(target);
    }
    Ok(Some(SubalgebraWitness { refinement_map }))
}

/// The least element of `C` above `a`: the union of the blocks of `C` meeting `a`.
pub fn atom_projection(coarse: &PartitionAlgebra, a: &RowSet) -> Result<RowSet, AlgebraError> {
    if a.universe() != coarse.universe() {
        return Err(AlgebraError::UniverseMismatch {
            left: a.universe().size(),
            right: coarse.universe().size(),
        });
    }
    let mut out = coarse.universe().empty_set();
    for id in coarse.blocks_meeting(a) {
        out.union_with(&coarse.block(id));
    }
    Ok(out)
}
