use rustc_hash::FxHashSet;
use serde::Serialize;

use super::{
    atom_projection, free_amalgam, generate_subalgebra, is_subalgebra, AlgebraError,
    PartitionAlgebra, RowSet, SubalgebraWitness,
};

/// Default bound on atoms per algebra for the element-enumerating routes.
pub const DEFAULT_CAP_ATOMS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Atom pairs under a common atom of `C` must meet.
    AtomPairs,
    /// Every `a ≤ b` is interpolated by some `c ∈ C`.
    Topological,
    /// Below each atom of `C`, proper elements of `A` and `B` are incomparable.
    Referee,
    /// `⟨A ∪ B⟩` has as many atoms as the free amalgam.
    PushOut,
}

/// Why independence fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndependenceWitness {
    /// Atoms `a ∈ At(A)`, `b ∈ At(B)` with `a ⊆ C^{≥b}↓` and `a ∩ b = ∅`.
    DisjointAtoms {
        a_atom: usize,
        b_atom: usize,
        a: RowSet,
        b: RowSet,
    },
    /// Proper nonzero `a ∈ A`, `b ∈ B` below the atom `c` of `C`, comparable.
    ComparableBelowAtom { c: RowSet, a: RowSet, b: RowSet },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceVerdict {
    pub independent: bool,
    pub route: Route,
    pub witness: Option<IndependenceWitness>,
}

/// Checks `C ≤ A` and `C ≤ B`, returning both refinement maps.
pub fn common_subalgebra(
    a: &PartitionAlgebra,
    b: &PartitionAlgebra,
    c: &PartitionAlgebra,
) -> Result<(SubalgebraWitness, SubalgebraWitness), AlgebraError> {
    let ca = is_subalgebra(c, a)?.ok_or(AlgebraError::NotSubalgebra { of: "A" })?;
    let cb = is_subalgebra(c, b)?.ok_or(AlgebraError::NotSubalgebra { of: "B" })?;
    Ok((ca, cb))
}

/// Decides `A ⫫_C B` through atom pairs: independent iff every `a ∈ At(A)`
/// with `a ≤ C^{≥b}↓` meets `b`, for all `b ∈ At(B)`.
///
/// Runs in time linear in the universe plus the number of compatible pairs
/// that are inspected. On failure the witness is the first violating pair in
/// canonical block order.
pub fn independence_fast(
    a: &PartitionAlgebra,
    b: &PartitionAlgebra,
    c: &PartitionAlgebra,
) -> Result<IndependenceVerdict, AlgebraError> {
    let (ca, cb) = common_subalgebra(a, b, c)?;
    let (a_labels, b_labels) = (a.labels(), b.labels());

    let mut met: FxHashSet<(u32, u32)> = FxHashSet::default();
    for (&la, &lb) in a_labels.iter().zip(b_labels) {
        met.insert((la, lb));
    }
    let mut a_per_c = vec![0u64; c.atom_count()];
    let mut b_per_c = vec![0u64; c.atom_count()];
    for &c_id in &ca.refinement_map {
        a_per_c[c_id] += 1;
    }
    for &c_id in &cb.refinement_map {
        b_per_c[c_id] += 1;
    }
    // Every meeting pair is compatible, so independence is a count comparison.
    let compatible: u64 = a_per_c.iter().zip(&b_per_c).map(|(x, y)| x * y).sum();
    if met.len() as u64 == compatible {
        return Ok(IndependenceVerdict {
            independent: true,
            route: Route::AtomPairs,
            witness: None,
        });
    }

    let mut b_under: Vec<Vec<usize>> = vec![Vec::new(); c.atom_count()];
    for (b_id, &c_id) in cb.refinement_map.iter().enumerate() {
        b_under[c_id].push(b_id);
    }
    for (a_id, &c_id) in ca.refinement_map.iter().enumerate() {
        if let Some(&b_id) = b_under[c_id]
            .iter()
            .find(|&&b_id| !met.contains(&(a_id as u32, b_id as u32)))
        {
            return Ok(IndependenceVerdict {
                independent: false,
                route: Route::AtomPairs,
                witness: Some(IndependenceWitness::DisjointAtoms {
                    a_atom: a_id,
                    b_atom: b_id,
                    a: a.block(a_id),
                    b: b.block(b_id),
                }),
            });
        }
    }
    unreachable!("pair count mismatch without a missing compatible pair")
}

/// Configuration for the element-enumerating routes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub cap_atoms: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            cap_atoms: DEFAULT_CAP_ATOMS,
        }
    }
}

/// Verdicts of the three cross-validation routes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleVerdicts {
    pub topological: bool,
    pub referee: bool,
    pub pushout: bool,
}

impl OracleVerdicts {
    pub fn all_equal(&self, expected: bool) -> bool {
        self.topological == expected && self.referee == expected && self.pushout == expected
    }
}

/// Runs the topological, referee, and push-out characterizations of `A ⫫_C B`.
///
/// These enumerate up to `2^|At|` elements per algebra and refuse above
/// `config.cap_atoms`. Callers compare the results with [`independence_fast`].
pub fn independence_oracles(
    a: &PartitionAlgebra,
    b: &PartitionAlgebra,
    c: &PartitionAlgebra,
    config: &OracleConfig,
) -> Result<OracleVerdicts, AlgebraError> {
    let (ca, cb) = common_subalgebra(a, b, c)?;
    for (route, alg) in [("topological", a), ("topological", b)] {
        if alg.atom_count() > config.cap_atoms.min(63) {
            return Err(AlgebraError::Capacity {
                route,
                atoms: alg.atom_count(),
                cap: config.cap_atoms,
            });
        }
    }
    Ok(OracleVerdicts {
        topological: topological_route(a, b, c)?.independent,
        referee: referee_route(a, b, c, &ca, &cb).independent,
        pushout: pushout_route(a, b, c)?.independent,
    })
}

/// Least element of `alg` above `set`, and greatest element below it.
fn upper(alg: &PartitionAlgebra, set: &RowSet) -> RowSet {
    atom_projection(alg, set).expect("same universe")
}

fn lower(alg: &PartitionAlgebra, set: &RowSet) -> RowSet {
    let mut out = alg.universe().empty_set();
    for id in alg.blocks_inside(set) {
        out.union_with(&alg.block(id));
    }
    out
}

/// For every `a ∈ A` and `b ∈ B` with `a ≤ b`, some `c ∈ C` has `a ≤ c ≤ b`.
///
/// Every `a` is enumerated. The `b ≥ a` are covered by the least such `b`,
/// and the interpolant exists iff the least element of `C` above `a` is below it.
fn topological_route(
    a: &PartitionAlgebra,
    b: &PartitionAlgebra,
    c: &PartitionAlgebra,
) -> Result<IndependenceVerdict, AlgebraError> {
    for mask in 0..(1u64 << a.atom_count()) {
        let elem = a.element_from_mask(mask);
        let least_b = upper(b, &elem);
        let least_c = upper(c, &elem);
        if !least_c.is_subset(&least_b) {
            return Ok(IndependenceVerdict {
                independent: false,
                route: Route::Topological,
                witness: Some(IndependenceWitness::ComparableBelowAtom {
                    c: least_c,
                    a: elem,
                    b: least_b,
                }),
            });
        }
    }
    Ok(IndependenceVerdict {
        independent: true,
        route: Route::Topological,
        witness: None,
    })
}

/// Below every atom `c` of `C`, no proper nonzero element of `A` is comparable
/// with a proper nonzero element of `B`.
fn referee_route(
    a: &PartitionAlgebra,
    b: &PartitionAlgebra,
    c: &PartitionAlgebra,
    ca: &SubalgebraWitness,
    cb: &SubalgebraWitness,
) -> IndependenceVerdict {
    for c_id in 0..c.atom_count() {
        let atom = c.block(c_id);
        let a_under: Vec<usize> = (0..a.atom_count())
            .filter(|&id| ca.refinement_map[id] == c_id)
            .collect();
        if a_under.len() < 2 || cb.refinement_map.iter().filter(|&&x| x == c_id).count() < 2 {
            continue;
        }
        // proper nonzero elements of A below c: nonempty, non-full subsets of a_under
        for mask in 1..(1u64 << a_under.len()) - 1 {
            let mut elem = a.universe().empty_set();
            for (bit, &id) in a_under.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    elem.union_with(&a.block(id));
                }
            }
            // a proper b ≥ elem exists iff the least one is proper; a nonzero
            // b ≤ elem exists iff the greatest one is nonzero
            let above = upper(b, &elem);
            let below = lower(b, &elem);
            let comparable = if above != atom {
                Some(above)
            } else if !below.is_empty() {
                Some(below)
            } else {
                None
            };
            if let Some(other) = comparable {
                return IndependenceVerdict {
                    independent: false,
                    route: Route::Referee,
                    witness: Some(IndependenceWitness::ComparableBelowAtom {
                        c: atom,
                        a: elem,
                        b: other,
                    }),
                };
            }
        }
    }
    IndependenceVerdict {
        independent: true,
        route: Route::Referee,
        witness: None,
    }
}

/// `⟨A ∪ B⟩ ≅ A ⊗_C B`. The canonical map from the amalgam onto the generated
/// algebra is surjective, so it is an isomorphism iff the atom counts agree.
fn pushout_route(
    a: &PartitionAlgebra,
    b: &PartitionAlgebra,
    c: &PartitionAlgebra,
) -> Result<IndependenceVerdict, AlgebraError> {
    let amalgam = free_amalgam(a, b, c)?;
    let mut generators = a.blocks();
    generators.extend(b.blocks());
    let joint = generate_subalgebra(a.universe(), &generators)?;
    Ok(IndependenceVerdict {
        independent: joint.atom_count() == amalgam.atom_count(),
        route: Route::PushOut,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Universe;

    fn gen(n: usize, gens: &[&[usize]]) -> PartitionAlgebra {
        let u = Universe::new(n);
        let sets: Vec<RowSet> = gens
            .iter()
            .map(|g| u.set_of(g.iter().copied()).unwrap())
            .collect();
        generate_subalgebra(u, &sets).unwrap()
    }

    #[test]
    fn crossing_generators_are_independent_over_two() {
        let a = gen(4, &[&[0, 1]]);
        let b = gen(4, &[&[0, 2]]);
        let two = gen(4, &[]);
        assert!(independence_fast(&a, &b, &two).unwrap().independent);
        let o = independence_oracles(&a, &b, &two, &OracleConfig::default()).unwrap();
        assert!(o.all_equal(true));
    }

    #[test]
    fn equal_algebras_are_dependent_over_two() {
        let a = gen(4, &[&[0, 1]]);
        let two = gen(4, &[]);
        let v = independence_fast(&a, &a, &two).unwrap();
        assert!(!v.independent);
        match v.witness {
            Some(IndependenceWitness::DisjointAtoms { a, b, a_atom, b_atom }) => {
                assert_eq!((a_atom, b_atom), (0, 1));
                assert_eq!(a.to_vec(), vec![0, 1]);
                assert_eq!(b.to_vec(), vec![2, 3]);
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn nested_generators_fail_every_route() {
        let a = gen(3, &[&[0]]);
        let b = gen(3, &[&[0, 1]]);
        let two = gen(3, &[]);
        assert!(!independence_fast(&a, &b, &two).unwrap().independent);
        let o = independence_oracles(&a, &b, &two, &OracleConfig::default()).unwrap();
        assert!(o.all_equal(false));
    }

    #[test]
    fn four_atom_configuration() {
        // rows 0..3 stand for the atoms c, d, e, f; a = c ∨ d, b = c ∨ e
        let a = gen(4, &[&[0, 1]]);
        let b = gen(4, &[&[0, 2]]);
        let two = gen(4, &[]);
        assert!(independence_fast(&a, &b, &two).unwrap().independent);
        let o = independence_oracles(&a, &b, &two, &OracleConfig::default()).unwrap();
        assert!(o.all_equal(true));
    }

    #[test]
    fn c_equal_to_a_is_independent() {
        let a = gen(4, &[&[0, 1]]);
        let b = gen(4, &[&[0, 1], &[0, 2]]);
        assert!(independence_fast(&a, &b, &a).unwrap().independent);
    }

    #[test]
    fn degenerate_universe_is_vacuously_independent() {
        let a = gen(0, &[]);
        assert!(independence_fast(&a, &a, &a).unwrap().independent);
        let o = independence_oracles(&a, &a, &a, &OracleConfig::default()).unwrap();
        assert!(o.all_equal(true));
    }

    #[test]
    fn cap_is_enforced() {
        let a = PartitionAlgebra::discrete(Universe::new(5));
        let two = PartitionAlgebra::trivial(Universe::new(5));
        let err = independence_oracles(&a, &a, &two, &OracleConfig { cap_atoms: 4 });
        assert!(matches!(err, Err(AlgebraError::Capacity { atoms: 5, cap: 4, .. })));
    }

    #[test]
    fn non_subalgebra_is_an_input_error() {
        let a = gen(4, &[&[0, 1]]);
        let c = gen(4, &[&[0, 2]]);
        assert!(independence_fast(&a, &a, &c).is_err());
    }
}
