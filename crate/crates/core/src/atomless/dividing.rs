use serde::Serialize;

use super::{
    generated_atoms, indiscernible_check, qf_type, split, ClopenSet, Indiscernibility,
    SequenceKind, WitnessSequence, WorkbenchError, DEFAULT_WINDOW,
};

/// An atom `c` of `⟨base⟩` where `a ∧ c` and `b ∧ c` are both proper below
/// `c` and one of the four cells `±a ∧ ±b ∧ c` vanishes.
pub(crate) struct RefereeFailure {
    pub index: usize,
    pub atom: ClopenSet,
    /// Replace `a` by `c ∧ ¬a`.
    pub flip_a: bool,
    /// Replace `b` by `c ∧ ¬b`.
    pub flip_b: bool,
}

fn proper_below(x: &ClopenSet, c: &ClopenSet) -> bool {
    !x.is_zero() && x != c
}

pub(crate) fn referee_failure(
    a: &ClopenSet,
    b: &ClopenSet,
    base: &[ClopenSet],
) -> Option<RefereeFailure> {
    generated_atoms(base).into_iter().enumerate().find_map(|(index, c)| {
        let (ac, bc) = (a.meet(&c), b.meet(&c));
        if !proper_below(&ac, &c) || !proper_below(&bc, &c) {
            return None;
        }
        let (nac, nbc) = (c.minus(a), c.minus(b));
        // (flip_a, flip_b) turning the vanishing cell into a* ∧ ¬b* = 0
        let (flip_a, flip_b) = if ac.minus(&bc).is_zero() {
            (false, false)
        } else if nac.minus(&nbc).is_zero() {
            (true, true)
        } else if ac.meet(&bc).is_zero() {
            (false, true)
        } else if nac.meet(&nbc).is_zero() {
            (true, false)
        } else {
            return None;
        };
        Some(RefereeFailure {
            index,
            atom: c,
            flip_a,
            flip_b,
        })
    })
}

/// Why `{x ≤ b_0, x ≤ b_1, x ≠ 0}` cannot be satisfied while `x ≤ b_0, x ≠ 0`
/// belongs to the type of `a` over `b_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InconsistencyCertificate {
    pub a_nonzero: bool,
    pub a_below_b0: bool,
    pub b0_meet_b1_zero: bool,
}

impl InconsistencyCertificate {
    pub fn new(a: &ClopenSet, b0: &ClopenSet, b1: &ClopenSet) -> Self {
        InconsistencyCertificate {
            a_nonzero: !a.is_zero(),
            a_below_b0: a.leq(b0),
            b0_meet_b1_zero: b0.disjoint(b1),
        }
    }

    pub fn valid(&self) -> bool {
        self.a_nonzero && self.a_below_b0 && self.b0_meet_b1_zero
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DividingWitness {
    /// Index of the failing atom among the atoms of `⟨base⟩`.
    pub atom_index: usize,
    pub atom: ClopenSet,
    /// `a` restricted to the atom, complemented inside it when needed so
    /// that `a ≤ b_0`.
    pub a: ClopenSet,
    pub complemented_a: bool,
    pub complemented_b: bool,
    /// `b_0` is `b` restricted (and possibly complemented) inside the atom.
    pub sequence: WitnessSequence,
    pub indiscernibility: Indiscernibility,
    pub certificate: InconsistencyCertificate,
}

/// Builds a sequence `b_0, …, b_{n-1}` of pairwise disjoint elements with the
/// type of `b_0` over `base`, showing that the type of `a` over `base ∪ {b}`
/// divides.
///
/// Fails with [`WorkbenchError::NotApplicable`] when `⟨base, a⟩` and
/// `⟨base, b⟩` are independent over `⟨base⟩`.
pub fn dividing_witness(
    a: &ClopenSet,
    b: &ClopenSet,
    base: &[ClopenSet],
    n: usize,
) -> Result<DividingWitness, WorkbenchError> {
    if n < 2 {
        return Err(WorkbenchError::Precondition(
            "a dividing sequence needs n >= 2".into(),
        ));
    }
    let failure = referee_failure(a, b, base).ok_or_else(|| {
        WorkbenchError::NotApplicable("a and b are independent over the base".into())
    })?;
    let c = &failure.atom;
    let a_star = if failure.flip_a { c.minus(a) } else { c.meet(a) };
    let b_star = if failure.flip_b { c.minus(b) } else { c.meet(b) };

    let mut sequence = vec![b_star.clone()];
    sequence.extend(split(&c.minus(&b_star), n - 1)?);

    let reference = qf_type(&sequence[..1], base);
    for (i, bi) in sequence.iter().enumerate() {
        if sequence[..i].iter().any(|bj| !bj.disjoint(bi)) {
            return Err(WorkbenchError::ContractViolated(format!("b_{i} meets an earlier b_j")));
        }
        if qf_type(std::slice::from_ref(bi), base) != reference {
            return Err(WorkbenchError::ContractViolated(format!(
                "b_{i} differs in type from b_0 over the base"
            )));
        }
    }
    let indiscernibility = indiscernible_check(&sequence, base, DEFAULT_WINDOW)?;
    if !indiscernibility.indiscernible {
        return Err(WorkbenchError::ContractViolated(format!(
            "dividing sequence is not indiscernible at {:?}",
            indiscernibility.violation
        )));
    }
    let certificate = InconsistencyCertificate::new(&a_star, &sequence[0], &sequence[1]);
    if !certificate.valid() {
        return Err(WorkbenchError::ContractViolated(
            "inconsistency certificate does not hold".into(),
        ));
    }
    Ok(DividingWitness {
        atom_index: failure.index,
        atom: failure.atom,
        a: a_star,
        complemented_a: failure.flip_a,
        complemented_b: failure.flip_b,
        sequence: WitnessSequence {
            base: base.to_vec(),
            sequence,
            kind: SequenceKind::DividingWitness,
        },
        indiscernibility,
        certificate,
    })
}
