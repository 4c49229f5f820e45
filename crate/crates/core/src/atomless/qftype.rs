use itertools::Itertools;
use serde::Serialize;

use super::{ClopenSet, WorkbenchError};
use crate::algebra::{generate_subalgebra, AlgebraError, PartitionAlgebra, RowSet, Universe};

/// Default subtuple length for indiscernibility checks.
pub const DEFAULT_WINDOW: usize = 3;

/// Nonzero cells of the algebra generated by `elements`, keyed by sign vector:
/// bit `i` of the key is set when the cell lies inside `elements[i]`.
/// Sorted by key.
pub fn cells(elements: &[ClopenSet]) -> Vec<(u64, ClopenSet)> {
    assert!(elements.len() <= 64, "sign vectors are limited to 64 elements");
    let mut out = refine(vec![(0, ClopenSet::one())], elements);
    out.sort_by_key(|(key, _)| *key);
    out
}

fn refine(start: Vec<(u64, ClopenSet)>, elements: &[ClopenSet]) -> Vec<(u64, ClopenSet)> {
    let mut current = start;
    for (i, e) in elements.iter().enumerate() {
        let mut next = Vec::with_capacity(current.len() * 2);
        for (key, cell) in current {
            let inside = cell.meet(e);
            let outside = cell.minus(e);
            if !inside.is_zero() {
                next.push((key | 1 << i, inside));
            }
            if !outside.is_zero() {
                next.push((key, outside));
            }
        }
        current = next;
    }
    current
}

/// The atoms of the finite algebra generated by `elements`, in sign-vector order.
pub fn generated_atoms(elements: &[ClopenSet]) -> Vec<ClopenSet> {
    cells(elements).into_iter().map(|(_, c)| c).collect()
}

/// Quantifier-free type of a tuple over a finite base: the sign vectors whose
/// cells are nonzero. Tuple elements take the low bits, base elements follow.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ZeroPattern {
    pub tuple_len: usize,
    pub base_len: usize,
    pub nonzero: Vec<u64>,
}

impl ZeroPattern {
    /// Whether the cell with sign vector `key` is nonzero.
    pub fn is_nonzero(&self, key: u64) -> bool {
        self.nonzero.binary_search(&key).is_ok()
    }
}

pub fn qf_type(tuple: &[ClopenSet], base: &[ClopenSet]) -> ZeroPattern {
    let all: Vec<ClopenSet> = tuple.iter().chain(base).cloned().collect();
    ZeroPattern {
        tuple_len: tuple.len(),
        base_len: base.len(),
        nonzero: cells(&all).into_iter().map(|(k, _)| k).collect(),
    }
}

/// Base cells computed once and refined by many tuples of the same length.
struct TypeOracle {
    base_cells: Vec<(u64, ClopenSet)>,
    base_len: usize,
    shift: usize,
}

impl TypeOracle {
    fn new(base: &[ClopenSet], tuple_len: usize) -> Self {
        let shifted = cells(base)
            .into_iter()
            .map(|(k, c)| (k << tuple_len, c))
            .collect();
        TypeOracle {
            base_cells: shifted,
            base_len: base.len(),
            shift: tuple_len,
        }
    }

    fn qf_type(&self, tuple: &[ClopenSet]) -> ZeroPattern {
        debug_assert_eq!(tuple.len(), self.shift);
        let mut nonzero: Vec<u64> = refine(self.base_cells.clone(), tuple)
            .into_iter()
            .map(|(k, _)| k)
            .collect();
        nonzero.sort_unstable();
        ZeroPattern {
            tuple_len: tuple.len(),
            base_len: self.base_len,
            nonzero,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceKind {
    DividingWitness,
    ExtensionInput,
}

/// A finite sequence `b_0, …, b_{n-1}` over a base given by generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessSequence {
    pub base: Vec<ClopenSet>,
    pub sequence: Vec<ClopenSet>,
    pub kind: SequenceKind,
}

impl WitnessSequence {
    pub fn indiscernible(&self, window: usize) -> Result<Indiscernibility, WorkbenchError> {
        indiscernible_check(&self.sequence, &self.base, window)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Indiscernibility {
    pub indiscernible: bool,
    pub window: usize,
    /// Number of subtuples compared.
    pub checked: usize,
    /// First increasing subtuple (by length, then lexicographically) whose
    /// type differs from the initial segment of the same length.
    pub violation: Option<Vec<usize>>,
}

/// Compares the type over `base` of every increasing subtuple of length at
/// most `window` with the initial segment of the same length.
pub fn indiscernible_check(
    seq: &[ClopenSet],
    base: &[ClopenSet],
    window: usize,
) -> Result<Indiscernibility, WorkbenchError> {
    if window == 0 {
        return Err(WorkbenchError::Precondition("window must be at least 1".into()));
    }
    if seq.len() < 2 {
        return Err(WorkbenchError::Precondition(
            "indiscernibility needs a sequence of length at least 2".into(),
        ));
    }
    let mut checked = 0;
    for len in 1..=window.min(seq.len()) {
        let oracle = TypeOracle::new(base, len);
        let reference = oracle.qf_type(&seq[..len]);
        for idx in (0..seq.len()).combinations(len) {
            checked += 1;
            let tuple: Vec<ClopenSet> = idx.iter().map(|&i| seq[i].clone()).collect();
            if oracle.qf_type(&tuple) != reference {
                return Ok(Indiscernibility {
                    indiscernible: false,
                    window,
                    checked,
                    violation: Some(idx),
                });
            }
        }
    }
    Ok(Indiscernibility {
        indiscernible: true,
        window,
        checked,
        violation: None,
    })
}

/// A finite configuration of clopen sets copied onto an explicit row
/// universe: one row per atom of the algebra they generate.
#[derive(Clone, Debug)]
pub struct FiniteShadow {
    pub universe: Universe,
    pub atoms: Vec<ClopenSet>,
    /// Image of each input element: the rows whose atom lies inside it.
    pub images: Vec<RowSet>,
}

impl FiniteShadow {
    /// Field of sets generated by the images of the chosen elements.
    pub fn algebra(&self, elements: &[usize]) -> Result<PartitionAlgebra, AlgebraError> {
        let gens: Vec<RowSet> = elements.iter().map(|&i| self.images[i].clone()).collect();
        generate_subalgebra(self.universe, &gens)
    }
}

pub fn finite_shadow(elements: &[ClopenSet]) -> FiniteShadow {
    let cells = cells(elements);
    let universe = Universe::new(cells.len());
    let images = (0..elements.len())
        .map(|i| {
            universe
                .set_of(
                    cells
                        .iter()
                        .enumerate()
                        .filter(|(_, (key, _))| key >> i & 1 == 1)
                        .map(|(row, _)| row),
                )
                .expect("rows are in range")
        })
        .collect();
    FiniteShadow {
        universe,
        atoms: cells.into_iter().map(|(_, c)| c).collect(),
        images,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyl(w: &str) -> ClopenSet {
        ClopenSet::cyl(w)
    }

    /// Sign-vector cell computed directly from the definition.
    fn cell(elements: &[ClopenSet], key: u64) -> ClopenSet {
        elements.iter().enumerate().fold(ClopenSet::one(), |acc, (i, e)| {
            if key >> i & 1 == 1 {
                acc.meet(e)
            } else {
                acc.minus(e)
            }
        })
    }

    #[test]
    fn four_cells_of_nested_pair() {
        let p = qf_type(&[cyl("0")], &[cyl("00")]);
        // bit 0: a, bit 1: b
        assert!(p.is_nonzero(0b11));
        assert!(p.is_nonzero(0b01));
        assert!(!p.is_nonzero(0b10));
        assert!(p.is_nonzero(0b00));
    }

    #[test]
    fn type_of_top() {
        let p = qf_type(&[ClopenSet::one()], &[]);
        assert_eq!(p.nonzero, vec![1]);
    }

    #[test]
    fn complementary_halves_share_type_over_top() {
        let base = [ClopenSet::one()];
        assert_eq!(qf_type(&[cyl("0")], &base), qf_type(&[cyl("1")], &base));
    }

    #[test]
    fn disjoint_cylinders_are_indiscernible() {
        let seq: Vec<ClopenSet> = (0..5).map(|i| cyl(&format!("{}0", "1".repeat(i)))).collect();
        let r = indiscernible_check(&seq, &[], 3).unwrap();
        assert!(r.indiscernible);
        assert_eq!(r.checked, 5 + 10 + 10);
    }

    #[test]
    fn increasing_chain_is_indiscernible() {
        let seq: Vec<ClopenSet> = (0..5)
            .map(|i| ClopenSet::from_words((0..=i).map(|j| {
                let mut w = vec![true; j];
                w.push(false);
                w
            })))
            .collect();
        assert!(indiscernible_check(&seq, &[], 3).unwrap().indiscernible);
    }

    #[test]
    fn mixed_sequence_is_caught() {
        let seq = [cyl("0"), cyl("10"), cyl("0").join(&cyl("10"))];
        let r = indiscernible_check(&seq, &[], 3).unwrap();
        assert!(!r.indiscernible);
        assert_eq!(r.violation, Some(vec![0, 2]));
    }

    #[test]
    fn degenerate_windows_rejected() {
        assert!(indiscernible_check(&[cyl("0"), cyl("1")], &[], 0).is_err());
        assert!(indiscernible_check(&[cyl("0")], &[], 3).is_err());
    }

    #[test]
    fn shadow_rows_are_atoms() {
        let sh = finite_shadow(&[cyl("0"), cyl("00")]);
        assert_eq!(sh.universe.size(), 3);
        assert_eq!(sh.images[1].len(), 1);
        assert!(sh.images[1].is_subset(&sh.images[0]));
        assert_eq!(sh.algebra(&[0]).unwrap().atom_count(), 2);
    }

    fn arb_clopen() -> impl Strategy<Value = ClopenSet> {
        (0usize..=4, any::<u64>()).prop_map(|(d, m)| ClopenSet::from_mask(d, m))
    }

    proptest! {
        #[test]
        fn cells_partition_top(es in prop::collection::vec(arb_clopen(), 0..5)) {
            let cs = cells(&es);
            let mut union = ClopenSet::zero();
            for (key, c) in &cs {
                prop_assert!(!c.is_zero());
                prop_assert!(union.disjoint(c));
                prop_assert_eq!(c, &cell(&es, *key));
                union = union.join(c);
            }
            prop_assert!(union.is_one());
            // every absent key is a zero cell
            for key in 0..(1u64 << es.len()) {
                let present = cs.iter().any(|(k, _)| *k == key);
                prop_assert_eq!(present, !cell(&es, key).is_zero());
            }
        }

        #[test]
        fn equal_types_split_base_cells_alike(
            a in arb_clopen(), a2 in arb_clopen(), base in prop::collection::vec(arb_clopen(), 0..3)
        ) {
            // Same type iff a and a2 cut every base cell the same way, which is
            // when sending cells to cells with equal sign vectors is a bijection
            // of the generated atoms fixing the base.
            let alike = (0..(1u64 << base.len())).all(|key| {
                let beta = cell(&base, key);
                beta.meet(&a).is_zero() == beta.meet(&a2).is_zero()
                    && beta.minus(&a).is_zero() == beta.minus(&a2).is_zero()
            });
            prop_assert_eq!(qf_type(&[a], &base) == qf_type(&[a2], &base), alike);
        }

        #[test]
        fn oracle_matches_direct_type(
            tuple in prop::collection::vec(arb_clopen(), 1..4),
            base in prop::collection::vec(arb_clopen(), 0..3)
        ) {
            let oracle = TypeOracle::new(&base, tuple.len());
            prop_assert_eq!(oracle.qf_type(&tuple), qf_type(&tuple, &base));
        }
    }
}
