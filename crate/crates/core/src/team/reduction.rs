use super::checks::{check_emvd, tuple_independence, Mode};
use super::{AttributeTuple, Team, TeamError};
use crate::algebra::{
    independence_fast, independence_oracles, is_subalgebra, AlgebraError, OracleConfig,
    OracleVerdicts, PartitionAlgebra, Universe,
};

/// `π(ẋ)`: the field of sets on the row ids generated by the fibers of `ẋ`.
/// An empty tuple gives the two-element algebra.
pub fn kernel_algebra(team: &Team, x: &AttributeTuple) -> Result<PartitionAlgebra, TeamError> {
    let fibers = team.column_function(x)?.fibers();
    Ok(PartitionAlgebra::from_labels(Universe::new(team.len()), &fibers.labels)?)
}

/// All verdicts for one EMVD `z ↠ x | y`, one per route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub emvd_fast: bool,
    pub emvd_bruteforce: bool,
    pub tuple_independence: bool,
    /// `π(ẋż) ⫫_{π(ż)} π(ẏż)` by atom pairs.
    pub algebra_fast: bool,
    /// The element-enumerating routes; `None` when above the atom cap.
    pub algebra_oracles: Option<OracleVerdicts>,
    /// `π(ż) ≤* π(ẋż)` and `π(ż) ≤* π(ẏż)` hold with validated refinement maps.
    pub kernel_subalgebras: bool,
    pub agreement: bool,
}

impl ConsistencyReport {
    /// The common verdict when all routes agree.
    pub fn verdict(&self) -> Option<bool> {
        self.agreement.then_some(self.emvd_fast)
    }
}

pub fn verify_reduction(
    team: &Team,
    z: &AttributeTuple,
    x: &AttributeTuple,
    y: &AttributeTuple,
    config: &OracleConfig,
) -> Result<ConsistencyReport, TeamError> {
    let emvd_fast = check_emvd(team, z, x, y, Mode::Fast)?.satisfied;
    let emvd_bruteforce = check_emvd(team, z, x, y, Mode::Bruteforce)?.satisfied;
    let tuple = tuple_independence(team, x, y, z)?;

    let a = kernel_algebra(team, &x.concat(z))?;
    let b = kernel_algebra(team, &y.concat(z))?;
    let c = kernel_algebra(team, z)?;
    let kernel_subalgebras = [&a, &b].into_iter().all(|fine| {
        matches!(is_subalgebra(&c, fine), Ok(Some(w)) if w.validate(&c, fine) && w.sits_nicely())
    });
    let algebra_fast = independence_fast(&a, &b, &c)?.independent;
    let algebra_oracles = match independence_oracles(&a, &b, &c, config) {
        Ok(v) => Some(v),
        Err(AlgebraError::Capacity { .. }) => None,
        Err(e) => return Err(e.into()),
    };

    let agreement = emvd_fast == emvd_bruteforce
        && emvd_fast == tuple
        && emvd_fast == algebra_fast
        && algebra_oracles.is_none_or(|o| o.all_equal(emvd_fast))
        && kernel_subalgebras;
    Ok(ConsistencyReport {
        emvd_fast,
        emvd_bruteforce,
        tuple_independence: tuple,
        algebra_fast,
        algebra_oracles,
        kernel_subalgebras,
        agreement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RowSet;
    use crate::team::Schema;

    fn team(attrs: &[&str], rows: &[&[&str]]) -> Team {
        Team::from_rows(Schema::new(attrs.iter().copied()).unwrap(), rows.iter()).unwrap()
    }

    fn t(names: &[&str]) -> AttributeTuple {
        AttributeTuple::new(names.iter().copied())
    }

    fn product() -> Team {
        team(&["x", "y"], &[&["0", "0"], &["0", "1"], &["1", "0"], &["1", "1"]])
    }

    #[test]
    fn kernel_blocks_are_fibers() {
        let tm = product();
        let blocks = |a: &PartitionAlgebra| a.blocks().iter().map(RowSet::to_vec).collect::<Vec<_>>();
        assert_eq!(blocks(&kernel_algebra(&tm, &t(&["x"])).unwrap()), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(kernel_algebra(&tm, &t(&["x", "y"])).unwrap().atom_count(), 4);
        assert_eq!(blocks(&kernel_algebra(&tm, &t(&[])).unwrap()), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn product_team_agrees_on_true() {
        let r = verify_reduction(&product(), &t(&[]), &t(&["x"]), &t(&["y"]), &OracleConfig::default())
            .unwrap();
        assert!(r.agreement);
        assert_eq!(r.verdict(), Some(true));
        assert!(r.algebra_oracles.unwrap().all_equal(true));
    }

    #[test]
    fn diagonal_team_agrees_on_false() {
        let diag = team(&["x", "y"], &[&["0", "0"], &["1", "1"]]);
        let r = verify_reduction(&diag, &t(&[]), &t(&["x"]), &t(&["y"]), &OracleConfig::default()).unwrap();
        assert!(r.agreement);
        assert_eq!(r.verdict(), Some(false));
    }

    #[test]
    fn oracles_skip_above_cap() {
        let r = verify_reduction(
            &product(),
            &t(&[]),
            &t(&["x", "y"]),
            &t(&["y"]),
            &OracleConfig { cap_atoms: 2 },
        )
        .unwrap();
        assert_eq!(r.algebra_oracles, None);
        assert!(r.agreement);
    }
}
