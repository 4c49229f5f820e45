use super::{ClopenSet, WorkbenchError};

/// `k` pairwise disjoint nonzero elements strictly below `a`, leaving a
/// nonzero remainder after every prefix.
///
/// With `s` the least word of `a`, the pieces are the cylinders of
/// `s·0, s·10, s·110, …`.
pub fn split(a: &ClopenSet, k: usize) -> Result<Vec<ClopenSet>, WorkbenchError> {
    let s = a
        .least_word()
        .ok_or_else(|| WorkbenchError::Precondition("cannot split the zero element".into()))?;
    if k == 0 {
        return Err(WorkbenchError::Precondition("split needs k >= 1".into()));
    }
    let pieces: Vec<ClopenSet> = (0..k)
        .map(|i| {
            let mut w = s.clone();
            w.extend(std::iter::repeat_n(true, i));
            w.push(false);
            ClopenSet::cylinder(&w)
        })
        .collect();

    let mut covered = ClopenSet::zero();
    for (i, p) in pieces.iter().enumerate() {
        let fresh = !p.is_zero() && p.disjoint(&covered);
        covered = covered.join(p);
        if !fresh || !covered.lt(a) {
            return Err(WorkbenchError::ContractViolated(format!(
                "split piece {i} of {a} breaks the splitting conditions"
            )));
        }
    }
    Ok(pieces)
}
