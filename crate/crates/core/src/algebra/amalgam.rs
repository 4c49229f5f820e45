use super::{is_subalgebra, AlgebraError, PartitionAlgebra, RowSet, Universe};

/// The push-out `A ⊗_C B` of two finite algebras over a common subalgebra.
///
/// Its atoms are the compatible pairs `(a, b)` with `a ∈ At(A)`, `b ∈ At(B)`
/// lying under the same atom of `C`. The algebra lives on a fresh universe
/// with one row per pair, so every block is a singleton.
#[derive(Clone, Debug)]
pub struct FreeAmalgam {
    pub algebra: PartitionAlgebra,
    /// Row `i` of the fresh universe is the pair `pairs[i]` (atom ids of A and B).
    pub pairs: Vec<(usize, usize)>,
    /// Image of each atom of `A` under the canonical embedding.
    pub embed_a: Vec<RowSet>,
    /// Image of each atom of `B` under the canonical embedding.
    pub embed_b: Vec<RowSet>,
}

impl FreeAmalgam {
    pub fn atom_count(&self) -> usize {
        self.pairs.len()
    }
}

pub fn free_amalgam(
    a: &PartitionAlgebra,
    b: &PartitionAlgebra,
    c: &PartitionAlgebra,
) -> Result<FreeAmalgam, AlgebraError> {
    let ca = is_subalgebra(c, a)?.ok_or(AlgebraError::NotSubalgebra { of: "A" })?;
    let cb = is_subalgebra(c, b)?.ok_or(AlgebraError::NotSubalgebra { of: "B" })?;

    let mut b_under: Vec<Vec<usize>> = vec![Vec::new(); c.atom_count()];
    for (b_id, &c_id) in cb.refinement_map.iter().enumerate() {
        b_under[c_id].push(b_id);
    }
    let pairs: Vec<(usize, usize)> = ca
        .refinement_map
        .iter()
        .enumerate()
        .flat_map(|(a_id, &c_id)| b_under[c_id].iter().map(move |&b_id| (a_id, b_id)))
        .collect();

    let universe = Universe::new(pairs.len());
    let mut embed_a = vec![universe.empty_set(); a.atom_count()];
    let mut embed_b = vec![universe.empty_set(); b.atom_count()];
    for (row, &(a_id, b_id)) in pairs.iter().enumerate() {
        embed_a[a_id].insert(row);
        embed_b[b_id].insert(row);
    }
    Ok(FreeAmalgam {
        algebra: PartitionAlgebra::discrete(universe),
        pairs,
        embed_a,
        embed_b,
    })
}
