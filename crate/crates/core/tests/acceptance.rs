//! Acceptance gate. Runs every criterion in sequence, prints one PASS/FAIL
//! line each, and exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use teamind::algebra::{
    independence_fast, independence_oracles, is_subalgebra, OracleConfig, PartitionAlgebra,
    Universe,
};
use teamind::atomless::{
    atba_demo, disjoint_test_sequence, dividing_witness, finite_shadow, indiscernible_check,
    nonforking_extension, qf_type, split, ClopenSet,
};
use teamind::cli::synthetic_team;
use teamind::dsl::DependencyAtom;
use teamind::team::{
    check_atom, check_emvd, check_fd, kernel_algebra, tuple_independence, AttributeTuple, Mode,
    Schema, Team,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn within(elapsed: Duration, budget_secs: u64) -> bool {
    elapsed < Duration::from_secs(budget_secs)
}

fn random_team(rng: &mut ChaCha8Rng) -> Team {
    let attrs = rng.random_range(1..=6);
    let rows = rng.random_range(1..=200);
    let values: Vec<u32> = (0..attrs).map(|_| rng.random_range(1..=8)).collect();
    let schema = Schema::new((0..attrs).map(|i| format!("c{i}"))).unwrap();
    let data: Vec<Vec<String>> = (0..rows)
        .map(|_| values.iter().map(|&v| rng.random_range(0..v).to_string()).collect())
        .collect();
    Team::from_rows(schema, data).unwrap()
}

fn random_tuple(rng: &mut ChaCha8Rng, team: &Team) -> AttributeTuple {
    AttributeTuple::new(
        team.schema()
            .attributes()
            .iter()
            .filter(|_| rng.random_bool(0.35))
            .cloned(),
    )
}

/// The team corpus: (team, sampled (z, x, y) choices).
type Corpus = Vec<(Team, Vec<(AttributeTuple, AttributeTuple, AttributeTuple)>)>;

fn corpus() -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7ea3);
    (0..1000)
        .map(|_| {
            let team = random_team(&mut rng);
            let choices = (0..10)
                .map(|_| {
                    (
                        random_tuple(&mut rng, &team),
                        random_tuple(&mut rng, &team),
                        random_tuple(&mut rng, &team),
                    )
                })
                .collect();
            (team, choices)
        })
        .collect()
}

fn reduction_chain(corpus: &Corpus) -> Outcome {
    let started = Instant::now();
    let (mut checked, mut disagreements, mut satisfied) = (0, 0, 0);
    for (team, choices) in corpus {
        for (z, x, y) in choices {
            let fast = check_emvd(team, z, x, y, Mode::Fast).unwrap().satisfied;
            let brute = check_emvd(team, z, x, y, Mode::Bruteforce).unwrap().satisfied;
            let tuple = tuple_independence(team, x, y, z).unwrap();
            let a = kernel_algebra(team, &x.concat(z)).unwrap();
            let b = kernel_algebra(team, &y.concat(z)).unwrap();
            let c = kernel_algebra(team, z).unwrap();
            let algebra = independence_fast(&a, &b, &c).unwrap().independent;
            checked += 1;
            satisfied += usize::from(fast);
            if !(fast == brute && fast == tuple && fast == algebra) {
                disagreements += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    outcome(
        disagreements == 0 && within(elapsed, 60),
        format!(
            "{checked} EMVDs on {} teams ({satisfied} satisfied), {disagreements} disagreements, {elapsed:.2?}",
            corpus.len()
        ),
    )
}

fn random_refinement(rng: &mut ChaCha8Rng, coarse: &[u32], max_split: u32) -> Vec<u32> {
    let splits = rng.random_range(1..=max_split);
    coarse
        .iter()
        .map(|&c| c * max_split + rng.random_range(0..splits))
        .collect()
}

fn four_routes() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xa16e);
    let (mut checked, mut disagreements, mut independent) = (0, 0, 0);
    while checked < 1000 {
        let n = rng.random_range(0..=12);
        let kc = rng.random_range(1..=4);
        let c_labels: Vec<u32> = (0..n).map(|_| rng.random_range(0..kc)).collect();
        let a_labels = random_refinement(&mut rng, &c_labels, 4);
        let b_labels = random_refinement(&mut rng, &c_labels, 4);
        let u = Universe::new(n);
        let c = PartitionAlgebra::from_labels(u, &c_labels).unwrap();
        let a = PartitionAlgebra::from_labels(u, &a_labels).unwrap();
        let b = PartitionAlgebra::from_labels(u, &b_labels).unwrap();
        if a.atom_count() > 12 || b.atom_count() > 12 {
            continue;
        }
        let fast = independence_fast(&a, &b, &c).unwrap().independent;
        let oracles = independence_oracles(&a, &b, &c, &OracleConfig { cap_atoms: 12 }).unwrap();
        checked += 1;
        independent += usize::from(fast);
        if !oracles.all_equal(fast) {
            disagreements += 1;
        }
    }
    let elapsed = started.elapsed();
    outcome(
        disagreements == 0 && within(elapsed, 60),
        format!("{checked} triples ({independent} independent), {disagreements} disagreements, {elapsed:.2?}"),
    )
}

fn fd_and_dep_translations(corpus: &Corpus) -> Outcome {
    let (mut checked, mut disagreements) = (0, 0);
    for (team, choices) in corpus {
        for (z, x, _) in choices {
            let fd = check_fd(team, z, x).unwrap().satisfied;
            let emvd = check_emvd(team, z, x, x, Mode::Fast).unwrap().satisfied;
            let emvd_brute = check_emvd(team, z, x, x, Mode::Bruteforce).unwrap().satisfied;
            let dep = DependencyAtom::Dep { u: z.clone(), v: x.clone() };
            let ind = DependencyAtom::Ind { u: x.clone(), w: z.clone(), v: x.clone() };
            let dep_v = check_atom(team, &dep, Mode::Fast).unwrap().satisfied;
            let ind_v = check_atom(team, &ind, Mode::Bruteforce).unwrap().satisfied;
            checked += 1;
            if !(fd == emvd && fd == emvd_brute && dep_v == ind_v && dep_v == fd) {
                disagreements += 1;
            }
        }
    }
    outcome(
        disagreements == 0,
        format!("{checked} FD/dep pairs, {disagreements} disagreements"),
    )
}

fn random_nonzero(rng: &mut ChaCha8Rng) -> ClopenSet {
    loop {
        let a = ClopenSet::from_mask(rng.random_range(0..=6), rng.random());
        if !a.is_zero() {
            return a;
        }
    }
}

fn splitting_lemma() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5911);
    let mut failures = 0;
    for _ in 0..100 {
        let a = random_nonzero(&mut rng);
        let pieces = split(&a, 50).unwrap();
        let mut below = ClopenSet::zero();
        for p in &pieces {
            let ok = !p.is_zero() && p.meet(&below).is_zero() && {
                below = below.join(p);
                below.meet(&a.complement()).is_zero() && below != a
            };
            if !ok {
                failures += 1;
                break;
            }
        }
    }
    let elapsed = started.elapsed();
    outcome(
        failures == 0 && within(elapsed, 5),
        format!("100 sets split into 50 pieces, {failures} failures, {elapsed:.2?}"),
    )
}

fn random_clopen(rng: &mut ChaCha8Rng) -> ClopenSet {
    ClopenSet::from_mask(rng.random_range(0..=6), rng.random())
}

/// Re-checks a dividing sequence from scratch: disjointness, type uniformity
/// over the base, window-3 indiscernibility, and the certificate.
fn dividing_contract(a: &ClopenSet, seq: &[ClopenSet], base: &[ClopenSet]) -> bool {
    let disjoint = (0..seq.len()).all(|i| (0..i).all(|j| seq[i].meet(&seq[j]).is_zero()));
    let uniform = seq
        .iter()
        .all(|b| qf_type(std::slice::from_ref(b), base) == qf_type(&seq[..1], base));
    let indiscernible = indiscernible_check(seq, base, 3).unwrap().indiscernible;
    let certificate = !a.is_zero() && a.meet(&seq[0].complement()).is_zero() && seq[0].meet(&seq[1]).is_zero();
    disjoint && uniform && indiscernible && certificate
}

fn extension_contract(a: &ClopenSet, a_prime: &ClopenSet, seq: &[ClopenSet], base: &[ClopenSet]) -> bool {
    let with = |b: &ClopenSet| {
        let mut p = base.to_vec();
        p.push(b.clone());
        p
    };
    let target = qf_type(std::slice::from_ref(a), &with(&seq[0]));
    let types = seq
        .iter()
        .all(|b| qf_type(std::slice::from_ref(a_prime), &with(b)) == target);
    let indiscernible = indiscernible_check(seq, &with(a_prime), 3).unwrap().indiscernible;
    types && indiscernible
}

fn dichotomy() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1c0);
    let (mut bad, mut dividing, mut extended) = (0, 0, 0);
    for _ in 0..200 {
        let base: Vec<ClopenSet> = (0..rng.random_range(0..=4)).map(|_| random_clopen(&mut rng)).collect();
        let a = random_clopen(&mut rng);
        let b = random_clopen(&mut rng);

        let mut elements = base.clone();
        elements.push(a.clone());
        elements.push(b.clone());
        let shadow = finite_shadow(&elements);
        let base_idx: Vec<usize> = (0..base.len()).collect();
        let with = |i: usize| {
            let mut v = base_idx.clone();
            v.push(i);
            v
        };
        let alg_a = shadow.algebra(&with(base.len())).unwrap();
        let alg_b = shadow.algebra(&with(base.len() + 1)).unwrap();
        let alg_c = shadow.algebra(&base_idx).unwrap();
        let independent = independence_fast(&alg_a, &alg_b, &alg_c).unwrap().independent;

        let witness = dividing_witness(&a, &b, &base, 8);
        let seq = disjoint_test_sequence(&b, &base, 8).unwrap().sequence;
        let extension = nonforking_extension(&a, &base, &seq, 3);

        let consistent = match (&witness, &extension) {
            (Ok(w), Err(_)) => {
                dividing += 1;
                !independent && dividing_contract(&w.a, &w.sequence.sequence, &base)
            }
            (Err(_), Ok(e)) => {
                extended += 1;
                independent && extension_contract(&a, &e.a_prime, &seq, &base)
            }
            _ => false,
        };
        if !consistent {
            bad += 1;
        }
    }
    let elapsed = started.elapsed();
    outcome(
        bad == 0 && within(elapsed, 120),
        format!(
            "200 configurations ({dividing} dividing, {extended} extended), {bad} failures, {elapsed:.2?}"
        ),
    )
}

fn atba() -> Outcome {
    let started = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for (m, n) in [(6, 3), (10, 5)] {
        let r = atba_demo(m, n).unwrap();
        // every candidate misses one of b_1, …, b_{n-1}
        let misses = r.candidates.iter().all(|c| {
            (1..n).any(|i| {
                let b_i = [4 + 2 * i - 2, 4 + 2 * i - 1];
                c.atoms.iter().all(|x| !b_i.contains(x))
            })
        });
        ok &= r.independent_fast
            && r.oracles.all_equal(true)
            && r.sequence_indiscernible
            && r.all_fail
            && r.candidates_checked == 2 * (m + 2)
            && misses;
        parts.push(format!(
            "m={m} n={n}: {}/{} candidates fail",
            r.candidates_failed, r.candidates_checked
        ));
    }
    let elapsed = started.elapsed();
    outcome(ok && within(elapsed, 5), format!("{}, {elapsed:.2?}", parts.join("; ")))
}

fn kernel_structure(corpus: &Corpus) -> Outcome {
    let (mut checked, mut failures) = (0, 0);
    for (team, choices) in corpus {
        for (z, x, _) in choices {
            let coarse = kernel_algebra(team, z).unwrap();
            let fine = kernel_algebra(team, &x.concat(z)).unwrap();
            checked += 1;
            let ok = match is_subalgebra(&coarse, &fine).unwrap() {
                Some(w) => {
                    w.validate(&coarse, &fine)
                        && (0..fine.atom_count()).all(|i| {
                            fine.block(i).is_subset(&coarse.block(w.refinement_map[i]))
                        })
                }
                None => false,
            };
            if !ok {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0,
        format!("{checked} kernel pairs, {failures} failures"),
    )
}

fn performance() -> Outcome {
    let team = synthetic_team(1_000_000, 5, 16, 42);
    let t = |n: &str| AttributeTuple::new([n]);
    let started = Instant::now();
    let full = check_emvd(&team, &t("a0"), &t("a1"), &t("a2"), Mode::Fast).unwrap();
    let elapsed = started.elapsed();

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let rows: Vec<Vec<&str>> = sample(&mut rng, team.len(), 2000)
        .into_iter()
        .map(|r| team.row(r))
        .collect();
    let sub = Team::from_rows(team.schema().clone(), rows).unwrap();
    let atoms = [
        (vec!["a0"], vec!["a1"], vec!["a2"]),
        (vec!["a1"], vec!["a2"], vec!["a3"]),
        (vec![], vec!["a0"], vec!["a1"]),
        (vec!["a0", "a1"], vec!["a2"], vec!["a3"]),
        (vec!["a0", "a1", "a2"], vec!["a3"], vec!["a4"]),
    ];
    let agree = atoms.iter().all(|(z, x, y)| {
        let (z, x, y) = (AttributeTuple::new(z.clone()), AttributeTuple::new(x.clone()), AttributeTuple::new(y.clone()));
        check_emvd(&sub, &z, &x, &y, Mode::Fast).unwrap().satisfied
            == check_emvd(&sub, &z, &x, &y, Mode::Bruteforce).unwrap().satisfied
    });
    outcome(
        team.len() == 1_000_000 && within(elapsed, 5) && agree,
        format!(
            "{} rows, a0 ->> a1 | a2 {} in {elapsed:.2?}; 2000-row subsample agrees: {agree}",
            team.len(),
            if full.satisfied { "satisfied" } else { "violated" }
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("team.csv");
    std::fs::write(&csv, "x,y,z\n0,0,a\n0,1,a\n1,0,b\n1,1,a\n2,0,b\n").unwrap();
    let team = csv.to_str().unwrap();
    let invocations: Vec<Vec<&str>> = vec![
        vec!["check", "--team", team, "--json", "z ->> x | y"],
        vec!["check", "--team", team, "--json", "--mode", "bruteforce", "x -> y"],
        vec!["crosscheck", "--team", team, "--json", "x _||_{z} y"],
        vec!["aba", "witness", "--a", "{00}", "--b", "{0}", "--json"],
        vec!["aba", "extend", "--a", "{00,10}", "--b", "{0}", "--json"],
        vec!["aba", "atba-demo", "--json"],
    ];
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_teamind"))
            .args(args)
            .output()
            .expect("binary runs")
            .stdout
    };
    let mut stable = 0;
    for args in &invocations {
        let (first, second) = (run(args), run(args));
        if !first.is_empty() && first == second {
            stable += 1;
        }
    }
    outcome(
        stable == invocations.len(),
        format!("{stable}/{} reports byte-identical across two runs", invocations.len()),
    )
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() -> ExitCode {
    let corpus = corpus();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 reduction chain", Box::new(|| reduction_chain(&corpus))),
        ("2 four-route algebra agreement", Box::new(four_routes)),
        ("3 FD-as-EMVD and dep-as-ind", Box::new(|| fd_and_dep_translations(&corpus))),
        ("4 splitting", Box::new(splitting_lemma)),
        ("5 dividing dichotomy", Box::new(dichotomy)),
        ("6 atomic counterexample", Box::new(atba)),
        ("7 kernel subalgebras", Box::new(|| kernel_structure(&corpus))),
        ("8 performance", Box::new(performance)),
        ("9 determinism", Box::new(determinism)),
    ];
    let mut all = true;
    for (name, criterion) in &criteria {
        let o = criterion();
        all &= o.passed;
        println!("{} criterion {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
