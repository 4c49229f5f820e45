use serde::Serialize;

use super::dividing::referee_failure;
use super::{
    generated_atoms, indiscernible_check, qf_type, split, ClopenSet, SequenceKind,
    WitnessSequence, WorkbenchError,
};

/// Largest number of once-split pieces the fallback search combines below a
/// single atom.
pub const DEFAULT_SEARCH_PIECES: usize = 16;

/// How `a' ∧ c` was chosen below one atom `c` of the base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomConstruction {
    /// `a ∧ c` or `b_0 ∧ c` is `0` or `c`, or the sequence is constant below `c`.
    Restrict,
    /// Join of the first split piece of every `b_i ∧ c`.
    DisjointPieces,
    /// Found by the bounded search over unions of split cells.
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extension {
    pub a_prime: ClopenSet,
    /// One entry per atom of `⟨base⟩`, in sign-vector order.
    pub constructions: Vec<AtomConstruction>,
}

/// Finds `a'` whose type over `base ∪ {b_i}` equals the type of `a` over
/// `base ∪ {b_0}` for every `i`, with the sequence still indiscernible over
/// `base ∪ {a'}`.
///
/// Requires `⟨base, a⟩` and `⟨base, b_0⟩` to be independent over `⟨base⟩` and
/// the sequence to be indiscernible over `base` at `window`. The result is
/// checked against both conditions before it is returned.
pub fn nonforking_extension(
    a: &ClopenSet,
    base: &[ClopenSet],
    seq: &[ClopenSet],
    window: usize,
) -> Result<Extension, WorkbenchError> {
    let b0 = seq
        .first()
        .ok_or_else(|| WorkbenchError::Precondition("empty sequence".into()))?;
    if seq.len() > 1 {
        let ind = indiscernible_check(seq, base, window)?;
        if let Some(violation) = ind.violation {
            return Err(WorkbenchError::NotIndiscernible { violation });
        }
    }
    if let Some(f) = referee_failure(a, b0, base) {
        return Err(WorkbenchError::NotApplicable(format!(
            "a and b_0 are comparable below base atom {}",
            f.index
        )));
    }

    let mut a_prime = ClopenSet::zero();
    let mut constructions = Vec::new();
    for (index, c) in generated_atoms(base).into_iter().enumerate() {
        let ac = a.meet(&c);
        let restricted: Vec<ClopenSet> = seq.iter().map(|b| b.meet(&c)).collect();
        let trivial = |x: &ClopenSet| x.is_zero() || *x == c;
        let (piece, how) = if trivial(&ac)
            || trivial(&restricted[0])
            || restricted.iter().all(|x| *x == restricted[0])
        {
            (ac, AtomConstruction::Restrict)
        } else if pairwise_disjoint(&restricted) {
            let mut joined = ClopenSet::zero();
            for x in &restricted {
                joined = joined.join(&split(x, 1)?[0]);
            }
            (joined, AtomConstruction::DisjointPieces)
        } else {
            let found = search_below_atom(index, &c, &ac, &restricted, window)?;
            (found, AtomConstruction::Search)
        };
        a_prime = a_prime.join(&piece);
        constructions.push(how);
    }

    verify_extension(a, &a_prime, base, seq, window)?;
    Ok(Extension {
        a_prime,
        constructions,
    })
}

fn pairwise_disjoint(xs: &[ClopenSet]) -> bool {
    xs.iter()
        .enumerate()
        .all(|(i, x)| xs[..i].iter().all(|y| x.disjoint(y)))
}

/// Local version of the contract below one atom `c`: `cand` cuts each
/// `b_i ∧ c` like `a ∧ c` cuts `b_0 ∧ c`, and the restricted sequence stays
/// indiscernible over `{c, cand}`.
fn locally_good(
    cand: &ClopenSet,
    c: &ClopenSet,
    ac: &ClopenSet,
    restricted: &[ClopenSet],
    window: usize,
) -> bool {
    let target = qf_type(std::slice::from_ref(ac), &[c.clone(), restricted[0].clone()]);
    restricted
        .iter()
        .all(|bi| qf_type(std::slice::from_ref(cand), &[c.clone(), bi.clone()]) == target)
        && (restricted.len() < 2
            || indiscernible_check(restricted, &[c.clone(), cand.clone()], window)
                .is_ok_and(|r| r.indiscernible))
}

fn search_below_atom(
    index: usize,
    c: &ClopenSet,
    ac: &ClopenSet,
    restricted: &[ClopenSet],
    window: usize,
) -> Result<ClopenSet, WorkbenchError> {
    let mut gens = vec![c.clone()];
    gens.extend(restricted.iter().cloned());
    let mut pieces = Vec::new();
    for cell in generated_atoms(&gens).into_iter().filter(|x| x.leq(c)) {
        let half = split(&cell, 1)?.swap_remove(0);
        pieces.push(cell.minus(&half));
        pieces.push(half);
    }
    if pieces.len() > DEFAULT_SEARCH_PIECES {
        return Err(WorkbenchError::UnsupportedShape { atom: index });
    }
    for mask in 1u32..(1 << pieces.len()) {
        let cand = pieces
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(ClopenSet::zero(), |acc, (_, p)| acc.join(p));
        if locally_good(&cand, c, ac, restricted, window) {
            return Ok(cand);
        }
    }
    Err(WorkbenchError::NotFound {
        atom: index,
        pieces: pieces.len(),
    })
}

fn verify_extension(
    a: &ClopenSet,
    a_prime: &ClopenSet,
    base: &[ClopenSet],
    seq: &[ClopenSet],
    window: usize,
) -> Result<(), WorkbenchError> {
    let over = |b: &ClopenSet| {
        let mut params = base.to_vec();
        params.push(b.clone());
        params
    };
    let target = qf_type(std::slice::from_ref(a), &over(&seq[0]));
    for (i, b) in seq.iter().enumerate() {
        if qf_type(std::slice::from_ref(a_prime), &over(b)) != target {
            return Err(WorkbenchError::ContractViolated(format!(
                "type of a' over b_{i} differs from the type of a over b_0"
            )));
        }
    }
    if seq.len() > 1 {
        let mut extended = base.to_vec();
        extended.push(a_prime.clone());
        let ind = indiscernible_check(seq, &extended, window)?;
        if !ind.indiscernible {
            return Err(WorkbenchError::ContractViolated(format!(
                "sequence is not indiscernible over a' at {:?}",
                ind.violation
            )));
        }
    }
    Ok(())
}

/// An indiscernible sequence starting at `b` that is pairwise disjoint below
/// every atom of `⟨base⟩` where `b` is proper, and constant elsewhere.
pub fn disjoint_test_sequence(
    b: &ClopenSet,
    base: &[ClopenSet],
    n: usize,
) -> Result<WitnessSequence, WorkbenchError> {
    if n == 0 {
        return Err(WorkbenchError::Precondition("sequence length must be positive".into()));
    }
    let mut tail = vec![ClopenSet::zero(); n - 1];
    for c in generated_atoms(base) {
        let bc = b.meet(&c);
        if bc.is_zero() || bc == c {
            for x in &mut tail {
                *x = x.join(&bc);
            }
        } else if !tail.is_empty() {
            for (x, piece) in tail.iter_mut().zip(split(&c.minus(&bc), n - 1)?) {
                *x = x.join(&piece);
            }
        }
    }
    let mut sequence = vec![b.clone()];
    sequence.extend(tail);
    Ok(WitnessSequence {
        base: base.to_vec(),
        sequence,
        kind: SequenceKind::ExtensionInput,
    })
}
