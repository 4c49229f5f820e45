//! Command-line front end. [`run`] returns the process exit code for checks:
//! 0 satisfied, 1 violated, 2 usage or input error, 3 route disagreement
//! or a broken internal contract.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebra::{OracleConfig, DEFAULT_CAP_ATOMS};
use crate::atomless::{
    atba_demo, disjoint_test_sequence, dividing_witness, nonforking_extension, split, ClopenSet,
    WorkbenchError, DEFAULT_WINDOW,
};
use crate::dsl::{parse_atom, DependencyAtom};
use crate::report::{check_json, crosscheck_json, emit_report};
use crate::team::{
    check_atom, check_emvd, load_team, verify_reduction, AttributeTuple, Format, Mode, Schema,
    Team, TeamError,
};

pub const EXIT_SATISFIED: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "teamind", version, about = "Check FDs, EMVDs and independence atoms on tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check one dependency atom on a team.
    Check(CheckArgs),
    /// Run every route for an atom and compare their verdicts.
    Crosscheck(CrosscheckArgs),
    /// Atomless Boolean algebra workbench.
    #[command(subcommand)]
    Aba(AbaCommand),
    /// Time the fast EMVD checker on generated data.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Fast,
    Bruteforce,
    Crosscheck,
}

#[derive(Debug, Args)]
pub struct TeamArgs {
    /// CSV or JSON file with one record per row.
    #[arg(long)]
    pub team: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Print the canonical JSON report.
    #[arg(long)]
    pub json: bool,
    /// Atom cap for the element-enumerating algebra routes.
    #[arg(long, env = "TEAMIND_CAP_ATOMS", default_value_t = DEFAULT_CAP_ATOMS)]
    pub cap_atoms: usize,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub team: TeamArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Fast)]
    pub mode: ModeArg,
    /// Include elapsed microseconds in the JSON stats.
    #[arg(long)]
    pub timings: bool,
    /// The atom, e.g. "z ->> x | y" or "u _||_{w} v".
    pub atom: String,
}

#[derive(Debug, Args)]
pub struct CrosscheckArgs {
    #[command(flatten)]
    pub team: TeamArgs,
    pub atom: String,
}

#[derive(Debug, Subcommand)]
pub enum AbaCommand {
    /// Split a clopen set into k disjoint pieces.
    Split {
        set: String,
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Build a dividing sequence for a dependent pair.
    Witness {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        base: Vec<String>,
        #[arg(short, long, default_value_t = 8)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Extend the type of a along an indiscernible sequence.
    Extend {
        #[arg(long)]
        a: String,
        #[arg(long)]
        base: Vec<String>,
        /// Sequence elements b_0, b_1, ... in order.
        #[arg(long)]
        seq: Vec<String>,
        /// Start of a generated disjoint test sequence, used when --seq is absent.
        #[arg(long)]
        b: Option<String>,
        #[arg(short, long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive finite atomic demonstration.
    AtbaDemo {
        #[arg(short, default_value_t = 6)]
        m: usize,
        #[arg(short, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub rows: usize,
    #[arg(long, default_value_t = 5)]
    pub attrs: usize,
    /// Distinct values per random attribute.
    #[arg(long, default_value_t = 16)]
    pub values: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

/// A team with columns `a0, a1, …`: uniform random codes below `values`
/// from a seeded ChaCha stream, except the last column, which numbers the
/// rows so that all of them are distinct.
pub fn synthetic_team(rows: usize, attrs: usize, values: u32, seed: u64) -> Team {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut columns: Vec<Vec<u32>> = (1..attrs)
        .map(|_| (0..rows).map(|_| rng.random_range(0..values.max(1))).collect())
        .collect();
    if attrs > 0 {
        columns.push((0..rows as u32).collect());
    }
    let schema = Schema::new((0..attrs).map(|i| format!("a{i}"))).expect("distinct names");
    Team::from_code_columns(schema, columns).expect("rectangular columns")
}

fn load(args: &TeamArgs) -> Result<Team, String> {
    let format = match args.format {
        Some(FormatArg::Csv) => Format::Csv,
        Some(FormatArg::Json) => Format::Json,
        None => Format::from_path(&args.team),
    };
    let file = File::open(&args.team).map_err(|e| format!("{}: {e}", args.team.display()))?;
    load_team(BufReader::new(file), format).map_err(|e| format!("{}: {e}", args.team.display()))
}

/// The EMVD an atom stands for: FDs and dependence atoms go through
/// `x ↠ y | y`.
fn emvd_form(atom: &DependencyAtom) -> (AttributeTuple, AttributeTuple, AttributeTuple) {
    match atom {
        DependencyAtom::Fd { x, y } => (x.clone(), y.clone(), y.clone()),
        DependencyAtom::Dep { u, v } => (u.clone(), v.clone(), v.clone()),
        DependencyAtom::Emvd { z, x, y } => (z.clone(), x.clone(), y.clone()),
        DependencyAtom::Ind { u, w, v } => (w.clone(), u.clone(), v.clone()),
    }
}

fn verdict_code(satisfied: bool) -> i32 {
    if satisfied {
        EXIT_SATISFIED
    } else {
        EXIT_VIOLATED
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Check(args) if args.mode == ModeArg::Crosscheck => {
            crosscheck(&args.team, &args.atom, out)
        }
        Command::Check(args) => check(&args, out),
        Command::Crosscheck(args) => crosscheck(&args.team, &args.atom, out),
        Command::Aba(cmd) => aba(cmd, out),
        Command::Bench(args) => bench(&args, out),
    };
    match result {
        Ok(code) => code,
        Err((code, message)) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

type Outcome = Result<i32, (i32, String)>;

fn usage<E: std::fmt::Display>(e: E) -> (i32, String) {
    (EXIT_USAGE, e.to_string())
}

fn team_error(e: TeamError) -> (i32, String) {
    (EXIT_USAGE, e.to_string())
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), (i32, String)> {
    out.write_all(text.as_bytes()).map_err(usage)
}

fn check(args: &CheckArgs, out: &mut dyn Write) -> Outcome {
    let atom = parse_atom(&args.atom).map_err(usage)?;
    let team = load(&args.team).map_err(|m| (EXIT_USAGE, m))?;
    let mode = match args.mode {
        ModeArg::Bruteforce => Mode::Bruteforce,
        _ => Mode::Fast,
    };
    let report = check_atom(&team, &atom, mode).map_err(team_error)?;
    if args.team.json {
        write_out(out, &emit_report(&check_json(&report, args.timings)))?;
    } else {
        let mut text = format!(
            "{}: {}\n",
            report.atom,
            if report.satisfied { "satisfied" } else { "violated" }
        );
        if let Some(w) = &report.witness {
            text.push_str(&format!("  {}\n", team.schema().attributes().join(",")));
            for (i, &row) in w.rows.iter().enumerate() {
                text.push_str(&format!("  t{i} row {row}: {}\n", team.row(row).join(",")));
            }
        }
        text.push_str(&format!(
            "rows {}, groups {}, {} us\n",
            report.stats.rows, report.stats.groups, report.stats.micros
        ));
        write_out(out, &text)?;
    }
    Ok(verdict_code(report.satisfied))
}

fn crosscheck(args: &TeamArgs, atom_text: &str, out: &mut dyn Write) -> Outcome {
    let atom = parse_atom(atom_text).map_err(usage)?;
    let team = load(args).map_err(|m| (EXIT_USAGE, m))?;
    let (z, x, y) = emvd_form(&atom);
    let config = OracleConfig {
        cap_atoms: args.cap_atoms,
    };
    let report = verify_reduction(&team, &z, &x, &y, &config).map_err(team_error)?;
    if args.json {
        write_out(out, &emit_report(&crosscheck_json(&atom, &report)))?;
    } else {
        let oracles = match report.algebra_oracles {
            Some(o) => format!(
                "topological {}, referee {}, pushout {}",
                o.topological, o.referee, o.pushout
            ),
            None => "skipped".to_string(),
        };
        let text = format!(
            "{atom}\n  emvd_fast {}\n  emvd_bruteforce {}\n  tuple_independence {}\n  \
             algebra_fast {}\n  algebra_oracles {oracles}\n  kernel_subalgebras {}\n  agreement {}\n",
            report.emvd_fast,
            report.emvd_bruteforce,
            report.tuple_independence,
            report.algebra_fast,
            report.kernel_subalgebras,
            report.agreement
        );
        write_out(out, &text)?;
    }
    match report.verdict() {
        Some(v) => Ok(verdict_code(v)),
        None => Ok(EXIT_DISAGREEMENT),
    }
}

fn workbench_error(e: WorkbenchError) -> (i32, String) {
    let code = match e {
        WorkbenchError::NotApplicable(_)
        | WorkbenchError::UnsupportedShape { .. }
        | WorkbenchError::NotFound { .. } => EXIT_VIOLATED,
        WorkbenchError::ContractViolated(_) => EXIT_DISAGREEMENT,
        _ => EXIT_USAGE,
    };
    (code, e.to_string())
}

fn clopen(text: &str) -> Result<ClopenSet, (i32, String)> {
    text.parse().map_err(workbench_error)
}

fn clopens(texts: &[String]) -> Result<Vec<ClopenSet>, (i32, String)> {
    texts.iter().map(|t| clopen(t)).collect()
}

fn show(sets: &[ClopenSet]) -> String {
    sets.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn aba(cmd: AbaCommand, out: &mut dyn Write) -> Outcome {
    match cmd {
        AbaCommand::Split { set, k, json } => {
            let a = clopen(&set)?;
            let pieces = split(&a, k).map_err(workbench_error)?;
            let text = if json {
                emit_report(&json!({ "set": a, "k": k, "pieces": pieces }))
            } else {
                format!("{}\n", show(&pieces))
            };
            write_out(out, &text)?;
            Ok(EXIT_SATISFIED)
        }
        AbaCommand::Witness { a, b, base, n, json } => {
            let w = dividing_witness(&clopen(&a)?, &clopen(&b)?, &clopens(&base)?, n)
                .map_err(workbench_error)?;
            let text = if json {
                emit_report(&w)
            } else {
                format!(
                    "atom {} (index {})\na {}\nsequence {}\ncertificate valid {}\n",
                    w.atom,
                    w.atom_index,
                    w.a,
                    show(&w.sequence.sequence),
                    w.certificate.valid()
                )
            };
            write_out(out, &text)?;
            Ok(EXIT_SATISFIED)
        }
        AbaCommand::Extend {
            a,
            base,
            seq,
            b,
            n,
            window,
            json,
        } => {
            let base = clopens(&base)?;
            let seq = match (seq.is_empty(), b) {
                (false, _) => clopens(&seq)?,
                (true, Some(b)) => {
                    disjoint_test_sequence(&clopen(&b)?, &base, n)
                        .map_err(workbench_error)?
                        .sequence
                }
                (true, None) => return Err(usage("extend needs --seq or --b")),
            };
            let ext =
                nonforking_extension(&clopen(&a)?, &base, &seq, window).map_err(workbench_error)?;
            let text = if json {
                emit_report(&json!({
                    "a_prime": ext.a_prime,
                    "constructions": ext.constructions,
                    "sequence": seq,
                    "window": window,
                }))
            } else {
                format!("a' {}\nsequence {}\n", ext.a_prime, show(&seq))
            };
            write_out(out, &text)?;
            Ok(EXIT_SATISFIED)
        }
        AbaCommand::AtbaDemo { m, n, json } => {
            let report = atba_demo(m, n).map_err(workbench_error)?;
            let text = if json {
                emit_report(&report)
            } else {
                format!(
                    "independent {}\nsequence indiscernible {}\ncandidates {} failed {}\na' = a fails at i = {:?}\n",
                    report.independent,
                    report.sequence_indiscernible,
                    report.candidates_checked,
                    report.candidates_failed,
                    report.identity_failure
                )
            };
            write_out(out, &text)?;
            let holds = report.independent && report.sequence_indiscernible && report.all_fail;
            Ok(if holds { EXIT_SATISFIED } else { EXIT_DISAGREEMENT })
        }
    }
}

fn bench(args: &BenchArgs, out: &mut dyn Write) -> Outcome {
    if args.attrs < 4 {
        return Err(usage("bench needs at least 4 attributes"));
    }
    let started = Instant::now();
    let team = synthetic_team(args.rows, args.attrs, args.values, args.seed);
    let generate_ms = started.elapsed().as_millis();
    let t = |name: &str| AttributeTuple::new([name]);
    let report = check_emvd(&team, &t("a0"), &t("a1"), &t("a2"), Mode::Fast).map_err(team_error)?;
    let text = if args.json {
        emit_report(&json!({
            "rows": team.len(),
            "attrs": args.attrs,
            "seed": args.seed,
            "satisfied": report.satisfied,
            "generate_ms": generate_ms,
            "check_micros": report.stats.micros,
        }))
    } else {
        format!(
            "{} rows x {} attrs (seed {}): a0 ->> a1 | a2 {} in {} us (generation {} ms)\n",
            team.len(),
            args.attrs,
            args.seed,
            if report.satisfied { "satisfied" } else { "violated" },
            report.stats.micros,
            generate_ms
        )
    };
    write_out(out, &text)?;
    Ok(EXIT_SATISFIED)
}
