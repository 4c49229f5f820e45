use itertools::Itertools;
use serde::Serialize;

use super::WorkbenchError;
use crate::algebra::{
    generate_subalgebra, independence_fast, independence_oracles, OracleConfig, OracleVerdicts,
    PartitionAlgebra, RowSet, Universe,
};

/// Counts above this are indistinguishable in the capped descriptors.
const ATOM_CAP: usize = 2;
/// Largest universe the exhaustive candidate enumeration accepts.
const MAX_ATOMS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtbaCandidate {
    /// Atoms (rows) whose join is the candidate.
    pub atoms: Vec<usize>,
    /// Least `i ≥ 1` for which `b_i` has a different type from `b_0` over
    /// the candidate, if any.
    pub first_failure: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtbaReport {
    pub spare_atoms: usize,
    pub seq_len: usize,
    pub independent_fast: bool,
    pub oracles: OracleVerdicts,
    pub independent: bool,
    /// The sequence `b_0, …, b_{n-1}` is indiscernible over the empty set.
    pub sequence_indiscernible: bool,
    pub candidates_checked: usize,
    pub candidates_failed: usize,
    pub all_fail: bool,
    /// Where `a' = a` itself fails.
    pub identity_failure: Option<usize>,
    pub candidates: Vec<AtbaCandidate>,
}

/// Capped sizes of the cells of `⟨tuple, base⟩`, indexed by sign vector.
fn capped_pattern(sets: &[&RowSet], universe: Universe) -> Vec<usize> {
    (0..1u64 << sets.len())
        .map(|key| {
            let count = (0..universe.size())
                .filter(|&row| {
                    sets.iter()
                        .enumerate()
                        .all(|(i, s)| s.contains(row) == (key >> i & 1 == 1))
                })
                .count();
            count.min(ATOM_CAP)
        })
        .collect()
}

/// Finite atomic demonstration: with atoms `c, d, e, f, p_0, …, p_{m-1}`,
/// `a = c ∨ d`, `b_0 = c ∨ e` and `b_i = p_{2i-2} ∨ p_{2i-1}`, the algebras
/// `⟨a⟩` and `⟨b_0⟩` are independent over `2`, yet every `a'` with the type
/// of `a` over `b_0` misses some `b_i`.
pub fn atba_demo(m: usize, n: usize) -> Result<AtbaReport, WorkbenchError> {
    if n < 3 {
        return Err(WorkbenchError::Precondition("atba demo needs n >= 3".into()));
    }
    if m < 2 * n {
        return Err(WorkbenchError::Precondition("atba demo needs m >= 2n".into()));
    }
    if 4 + m > MAX_ATOMS {
        return Err(WorkbenchError::Precondition(format!(
            "atba demo enumerates at most {MAX_ATOMS} atoms"
        )));
    }
    let universe = Universe::new(4 + m);
    let (c, d, e) = (0, 1, 2);
    let set = |rows: &[usize]| universe.set_of(rows.iter().copied());
    let a = set(&[c, d])?;
    let mut seq = vec![set(&[c, e])?];
    for i in 1..n {
        seq.push(set(&[4 + 2 * i - 2, 4 + 2 * i - 1])?);
    }

    let alg_a = generate_subalgebra(universe, std::slice::from_ref(&a))?;
    let alg_b = generate_subalgebra(universe, &seq[..1])?;
    let trivial = PartitionAlgebra::trivial(universe);
    let independent_fast = independence_fast(&alg_a, &alg_b, &trivial)?.independent;
    let oracles = independence_oracles(&alg_a, &alg_b, &trivial, &OracleConfig::default())?;

    let sequence_indiscernible = (1..=3.min(n)).all(|len| {
        let reference = capped_pattern(&seq[..len].iter().collect_vec(), universe);
        (0..n).combinations(len).all(|idx| {
            capped_pattern(&idx.iter().map(|&i| &seq[i]).collect_vec(), universe) == reference
        })
    });

    let first_failure = |cand: &RowSet| {
        let reference = capped_pattern(&[&seq[0], cand], universe);
        (1..n).find(|&i| capped_pattern(&[&seq[i], cand], universe) != reference)
    };
    let target = capped_pattern(&[&a, &seq[0]], universe);
    let mut candidates = Vec::new();
    for mask in 0u64..1 << universe.size() {
        let cand = set(&(0..universe.size()).filter(|r| mask >> r & 1 == 1).collect_vec())?;
        if capped_pattern(&[&cand, &seq[0]], universe) == target {
            candidates.push(AtbaCandidate {
                first_failure: first_failure(&cand),
                atoms: cand.to_vec(),
            });
        }
    }
    let candidates_failed = candidates.iter().filter(|c| c.first_failure.is_some()).count();
    Ok(AtbaReport {
        spare_atoms: m,
        seq_len: n,
        independent_fast,
        oracles,
        independent: independent_fast && oracles.all_equal(true),
        sequence_indiscernible,
        candidates_checked: candidates.len(),
        candidates_failed,
        all_fail: candidates_failed == candidates.len(),
        identity_failure: first_failure(&a),
        candidates,
    })
}
