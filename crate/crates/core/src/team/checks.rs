use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use rustc_hash::FxHashSet;

use super::{AttributeTuple, Team, TeamError};
use crate::dsl::DependencyAtom;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    /// Group-by and product-cardinality check.
    #[default]
    Fast,
    /// Literal quantifier loops over the definition.
    Bruteforce,
}

/// The offending rows of a violated atom, with their full records.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowWitness {
    pub rows: Vec<usize>,
    pub values: Vec<BTreeMap<String, String>>,
}

impl RowWitness {
    fn new(team: &Team, rows: Vec<usize>) -> Self {
        let values = rows
            .iter()
            .map(|&r| {
                team.schema()
                    .attributes()
                    .iter()
                    .cloned()
                    .zip(team.row(r).into_iter().map(str::to_owned))
                    .collect()
            })
            .collect();
        RowWitness { rows, values }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckStats {
    pub rows: usize,
    pub groups: usize,
    pub micros: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub atom: DependencyAtom,
    pub satisfied: bool,
    pub witness: Option<RowWitness>,
    pub stats: CheckStats,
}

impl CheckReport {
    fn build(
        team: &Team,
        atom: DependencyAtom,
        violation: Option<(usize, usize)>,
        groups: usize,
        started: Instant,
    ) -> Self {
        CheckReport {
            atom,
            satisfied: violation.is_none(),
            witness: violation.map(|(t0, t1)| RowWitness::new(team, vec![t0, t1])),
            stats: CheckStats {
                rows: team.len(),
                groups,
                micros: started.elapsed().as_micros() as u64,
            },
        }
    }
}

/// `x → y`: rows agreeing on `x` agree on `y`.
///
/// Linear expected time. The witness is the least pair `t0 < t1` (by `t0`,
/// then `t1`) that agrees on `x` and differs on `y`.
pub fn check_fd(team: &Team, x: &AttributeTuple, y: &AttributeTuple) -> Result<CheckReport, TeamError> {
    let atom = DependencyAtom::Fd {
        x: x.clone(),
        y: y.clone(),
    };
    fd_report(team, atom, x, y)
}

fn fd_report(
    team: &Team,
    atom: DependencyAtom,
    x: &AttributeTuple,
    y: &AttributeTuple,
) -> Result<CheckReport, TeamError> {
    let started = Instant::now();
    let fx = team.fibers(&x.resolve(team.schema())?);
    let fy = team.fibers(&y.resolve(team.schema())?);

    // per x-group: its first row, and the first later row whose y differs
    let mut first: Vec<Option<usize>> = vec![None; fx.count];
    let mut conflict: Vec<Option<usize>> = vec![None; fx.count];
    for row in 0..team.len() {
        let g = fx.labels[row] as usize;
        match first[g] {
            None => first[g] = Some(row),
            Some(f) => {
                if conflict[g].is_none() && fy.labels[f] != fy.labels[row] {
                    conflict[g] = Some(row);
                }
            }
        }
    }
    // groups are numbered by first occurrence, so the earliest violating group
    // has the least first row
    let violation = (0..fx.count)
        .find(|&g| conflict[g].is_some())
        .map(|g| (first[g].unwrap(), conflict[g].unwrap()));
    Ok(CheckReport::build(team, atom, violation, fx.count, started))
}

/// `z ↠ x | y`: for all `t0, t1` agreeing on `z` some `t2` has
/// `t2(z) = t0(z)`, `t2(x) = t0(x)` and `t2(y) = t1(y)`.
///
/// The witness is the least ordered pair `(t0, t1)` with no such `t2`.
pub fn check_emvd(
    team: &Team,
    z: &AttributeTuple,
    x: &AttributeTuple,
    y: &AttributeTuple,
    mode: Mode,
) -> Result<CheckReport, TeamError> {
    let atom = DependencyAtom::Emvd {
        z: z.clone(),
        x: x.clone(),
        y: y.clone(),
    };
    emvd_report(team, atom, z, x, y, mode)
}

fn emvd_report(
    team: &Team,
    atom: DependencyAtom,
    z: &AttributeTuple,
    x: &AttributeTuple,
    y: &AttributeTuple,
    mode: Mode,
) -> Result<CheckReport, TeamError> {
    let started = Instant::now();
    let schema = team.schema();
    let (z, x, y) = (z.resolve(schema)?, x.resolve(schema)?, y.resolve(schema)?);
    let (violation, groups) = match mode {
        Mode::Fast => emvd_fast(team, &z, &x, &y),
        Mode::Bruteforce => emvd_bruteforce(team, &z, &x, &y),
    };
    Ok(CheckReport::build(team, atom, violation, groups, started))
}

/// Within each `z`-group with `X_g` distinct `x`-values and `Y_g` distinct
/// `y`-values, the observed `(x, y)` pairs must be all of `X_g × Y_g`.
fn emvd_fast(team: &Team, z: &[usize], x: &[usize], y: &[usize]) -> (Option<(usize, usize)>, usize) {
    let cat = |parts: &[&[usize]]| parts.concat();
    let fz = team.fibers(z);
    let fzx = team.fibers(&cat(&[z, x]));
    let fzy = team.fibers(&cat(&[z, y]));
    let fzxy = team.fibers(&cat(&[z, x, y]));

    let mut x_per_z = vec![0u64; fz.count];
    let mut y_per_z = vec![0u64; fz.count];
    let mut xy_per_z = vec![0u64; fz.count];
    // distinct y-values seen with each (z, x)
    let mut y_per_zx = vec![0u64; fzx.count];
    let mut seen_zx = vec![false; fzx.count];
    let mut seen_zy = vec![false; fzy.count];
    let mut seen_zxy = vec![false; fzxy.count];
    for row in 0..team.len() {
        let g = fz.labels[row] as usize;
        let zx = fzx.labels[row] as usize;
        if !std::mem::replace(&mut seen_zx[zx], true) {
            x_per_z[g] += 1;
        }
        let zy = fzy.labels[row] as usize;
        if !std::mem::replace(&mut seen_zy[zy], true) {
            y_per_z[g] += 1;
        }
        let zxy = fzxy.labels[row] as usize;
        if !std::mem::replace(&mut seen_zxy[zxy], true) {
            xy_per_z[g] += 1;
            y_per_zx[zx] += 1;
        }
    }
    let satisfied = (0..fz.count).all(|g| xy_per_z[g] == x_per_z[g] * y_per_z[g]);
    if satisfied {
        return (None, fz.count);
    }

    // t0: first row whose x-value misses some y-value of its group
    let t0 = (0..team.len())
        .find(|&r| y_per_zx[fzx.labels[r] as usize] < y_per_z[fz.labels[r] as usize])
        .expect("a violating group has an incomplete x-value");
    let mut paired = vec![false; fzy.count];
    for r in 0..team.len() {
        if fzx.labels[r] == fzx.labels[t0] {
            paired[fzy.labels[r] as usize] = true;
        }
    }
    let t1 = (0..team.len())
        .find(|&r| fz.labels[r] == fz.labels[t0] && !paired[fzy.labels[r] as usize])
        .expect("t0 misses a y-value of its group");
    (Some((t0, t1)), fz.count)
}

/// Value codes of `attrs` for every row, flattened row-major.
fn projections(team: &Team, attrs: &[usize]) -> Vec<u32> {
    let mut out = Vec::with_capacity(team.len() * attrs.len());
    for row in 0..team.len() {
        out.extend(attrs.iter().map(|&a| team.code(row, a)));
    }
    out
}

/// Literal triple loop. `t1` and `t2` range over the rows whose `z`-values
/// equal `t0`'s, found by sorting rows on their `z`-projection.
fn emvd_bruteforce(
    team: &Team,
    z: &[usize],
    x: &[usize],
    y: &[usize],
) -> (Option<(usize, usize)>, usize) {
    let n = team.len();
    let (zs, xs, ys) = (projections(team, z), projections(team, x), projections(team, y));
    let zv = |r: usize| &zs[r * z.len()..(r + 1) * z.len()];
    let xv = |r: usize| &xs[r * x.len()..(r + 1) * x.len()];
    let yv = |r: usize| &ys[r * y.len()..(r + 1) * y.len()];

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| zv(a).cmp(zv(b)));
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut group = vec![0usize; n];
    for (i, &r) in order.iter().enumerate() {
        if i == 0 || zv(order[i - 1]) != zv(r) {
            members.push(Vec::new());
        }
        group[r] = members.len() - 1;
        members.last_mut().unwrap().push(r);
    }

    for t0 in 0..n {
        let same_z = &members[group[t0]];
        for &t1 in same_z {
            let found = same_z
                .iter()
                .any(|&t2| zv(t2) == zv(t0) && xv(t2) == xv(t0) && yv(t2) == yv(t1));
            if !found {
                return (Some((t0, t1)), members.len());
            }
        }
    }
    (None, members.len())
}

/// Checks any atom. `dep(u; v)` and `x -> y` go to [`check_fd`];
/// `u ⊥_w v` is the EMVD `w ↠ u | v`.
pub fn check_atom(team: &Team, atom: &DependencyAtom, mode: Mode) -> Result<CheckReport, TeamError> {
    match atom {
        DependencyAtom::Fd { x, y } => fd_report(team, atom.clone(), x, y),
        DependencyAtom::Dep { u, v } => fd_report(team, atom.clone(), u, v),
        DependencyAtom::Emvd { z, x, y } => emvd_report(team, atom.clone(), z, x, y, mode),
        DependencyAtom::Ind { u, w, v } => emvd_report(team, atom.clone(), w, u, v, mode),
    }
}

/// `f ⫫_h g` for the column functions `f = ẋ`, `g = ẏ`, `h = ż`:
/// for all rows `p, q` with `h(p) = h(q)` some row `t` has `h(t) = h(p)`,
/// `f(t) = f(p)` and `g(t) = g(q)`.
///
/// Quadratic in the number of rows; values are compared as strings.
pub fn tuple_independence(
    team: &Team,
    x: &AttributeTuple,
    y: &AttributeTuple,
    z: &AttributeTuple,
) -> Result<bool, TeamError> {
    let f = team.column_function(x)?;
    let g = team.column_function(y)?;
    let h = team.column_function(z)?;
    let n = team.len();

    fn intern<'a>(values: impl Iterator<Item = Vec<&'a str>>) -> Vec<u32> {
        let mut ids: HashMap<Vec<&'a str>, u32> = HashMap::new();
        values
            .map(|v| {
                let next = ids.len() as u32;
                *ids.entry(v).or_insert(next)
            })
            .collect()
    }
    let fv = intern((0..n).map(|r| f.eval(r)));
    let gv = intern((0..n).map(|r| g.eval(r)));
    let hv = intern((0..n).map(|r| h.eval(r)));
    let realized: FxHashSet<(u32, u32, u32)> = (0..n).map(|t| (hv[t], fv[t], gv[t])).collect();

    for p in 0..n {
        for q in 0..n {
            if hv[p] == hv[q] && !realized.contains(&(hv[p], fv[p], gv[q])) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::team::Schema;

    fn team(attrs: &[&str], rows: &[&[&str]]) -> Team {
        Team::from_rows(Schema::new(attrs.iter().copied()).unwrap(), rows.iter()).unwrap()
    }

    fn t(names: &[&str]) -> AttributeTuple {
        AttributeTuple::new(names.iter().copied())
    }

    /// Every ordered pair `t0 < t1`, first violation wins.
    fn fd_pairs_oracle(team: &Team, x: &[&str], y: &[&str]) -> Option<(usize, usize)> {
        let fx = team.column_function(&t(x)).unwrap();
        let fy = team.column_function(&t(y)).unwrap();
        for t0 in 0..team.len() {
            for t1 in t0 + 1..team.len() {
                if fx.eval(t0) == fx.eval(t1) && fy.eval(t0) != fy.eval(t1) {
                    return Some((t0, t1));
                }
            }
        }
        None
    }

    #[test]
    fn fd_examples() {
        let injective = team(&["x", "y"], &[&["0", "1"], &["1", "2"]]);
        assert!(check_fd(&injective, &t(&["x"]), &t(&["y"])).unwrap().satisfied);

        let clash = team(&["x", "y"], &[&["0", "1"], &["0", "2"]]);
        let r = check_fd(&clash, &t(&["x"]), &t(&["y"])).unwrap();
        assert!(!r.satisfied);
        assert_eq!(r.witness.unwrap().rows, vec![0, 1]);
        assert_eq!(fd_pairs_oracle(&clash, &["x"], &["y"]), Some((0, 1)));

        let empty = team(&["x", "y"], &[]);
        assert!(check_fd(&empty, &t(&["x"]), &t(&["y"])).unwrap().satisfied);
    }

    #[test]
    fn fd_witness_is_least_pair() {
        let rows: &[&[&str]] = &[&["1", "a"], &["0", "a"], &["0", "a2"], &["1", "b"]];
        let tm = team(&["x", "y"], rows);
        let r = check_fd(&tm, &t(&["x"]), &t(&["y"])).unwrap();
        assert_eq!(Some((0, 3)), fd_pairs_oracle(&tm, &["x"], &["y"]));
        assert_eq!(r.witness.unwrap().rows, vec![0, 3]);
    }

    #[test]
    fn emvd_examples() {
        let full = team(
            &["z", "x", "y"],
            &[&["0", "0", "0"], &["0", "0", "1"], &["0", "1", "0"], &["0", "1", "1"]],
        );
        for mode in [Mode::Fast, Mode::Bruteforce] {
            assert!(check_emvd(&full, &t(&["z"]), &t(&["x"]), &t(&["y"]), mode).unwrap().satisfied);
        }

        let diag = team(&["z", "x", "y"], &[&["0", "0", "0"], &["0", "1", "1"]]);
        for mode in [Mode::Fast, Mode::Bruteforce] {
            let r = check_emvd(&diag, &t(&["z"]), &t(&["x"]), &t(&["y"]), mode).unwrap();
            assert!(!r.satisfied);
            let w = r.witness.unwrap();
            assert_eq!(w.rows, vec![0, 1]);
            assert_eq!(w.values[0]["x"], "0");
            assert_eq!(w.values[1]["y"], "1");
        }

        for mode in [Mode::Fast, Mode::Bruteforce] {
            assert!(check_emvd(&diag, &t(&["z"]), &t(&[]), &t(&["y"]), mode).unwrap().satisfied);
        }
    }

    #[test]
    fn atoms_dispatch() {
        let clash = team(&["x", "y"], &[&["0", "1"], &["0", "2"]]);
        let dep = DependencyAtom::Dep { u: t(&["x"]), v: t(&["y"]) };
        assert!(!check_atom(&clash, &dep, Mode::Fast).unwrap().satisfied);

        let product = team(&["x", "y"], &[&["0", "0"], &["0", "1"], &["1", "0"], &["1", "1"]]);
        let ind = DependencyAtom::Ind { u: t(&["x"]), w: t(&[]), v: t(&["y"]) };
        let r = check_atom(&product, &ind, Mode::Fast).unwrap();
        assert!(r.satisfied);
        assert_eq!(r.atom, ind);

        let unknown = DependencyAtom::Fd { x: t(&["q"]), y: t(&["y"]) };
        assert!(matches!(
            check_atom(&product, &unknown, Mode::Fast),
            Err(TeamError::UnknownAttribute(_))
        ));
    }

    #[test]
    fn tuple_independence_examples() {
        let product = team(&["x", "y"], &[&["0", "0"], &["0", "1"], &["1", "0"], &["1", "1"]]);
        assert!(tuple_independence(&product, &t(&["x"]), &t(&["y"]), &t(&[])).unwrap());

        let diag = team(&["x", "y"], &[&["0", "0"], &["1", "1"]]);
        assert!(!tuple_independence(&diag, &t(&["x"]), &t(&["y"]), &t(&[])).unwrap());

        let x = t(&["x"]);
        assert!(tuple_independence(&diag, &x, &x, &x).unwrap());
    }
}
