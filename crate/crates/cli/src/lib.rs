//! `ucsc` command-line front end.
//!
//! Exit codes: 0 success / holds / empty search, 2 not applicable,
//! 3 fails or counterexample found, 64 usage error, 65 malformed input,
//! 1 internal error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use ucsc_core::checkers::{self, verdict_report, Conjecture, Status, Verdict};
use ucsc_core::enumeration::{self, EnumCheckpoint, EnumFilter};
use ucsc_core::format::{family_to_json, parse_any};
use ucsc_core::search::{self, RandomSearch, ScanOptions, SearchOutcome, SearchTarget};
use ucsc_core::{AbundanceRule, Error, SetFamily};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_NOT_APPLICABLE: i32 = 2;
pub const EXIT_FAILS: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

#[derive(Parser, Debug)]
#[command(name = "ucsc", version, about = "Union-closed sets laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check conjectures on a family file
    Check {
        #[arg(long, value_enum, default_value_t = ConjectureArg::All)]
        conjecture: ConjectureArg,
        #[arg(long)]
        json: bool,
        /// Count an element as abundant only when in more than half the sets
        #[arg(long)]
        strict_half: bool,
        file: PathBuf,
    },
    /// Print the union closure of a family file
    Closure {
        #[arg(long)]
        json: bool,
        file: PathBuf,
    },
    /// Enumerate union-closed families over {1..n}
    Enumerate {
        #[arg(long)]
        n: u32,
        #[arg(long, conflicts_with = "t_exact")]
        t_min: Option<u32>,
        #[arg(long)]
        t_exact: Option<u32>,
        /// Keep only canonical representatives
        #[arg(long)]
        canonical: bool,
        #[arg(long)]
        count_only: bool,
        #[arg(long, value_enum)]
        check: Option<SingleConjecture>,
        /// Resume from a checkpoint file
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        /// Print the subtree checkpoints at this depth instead of enumerating
        #[arg(long)]
        partition: Option<usize>,
    },
    /// Search for counterexamples
    Search {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_target)]
        target: SearchTarget,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        iters: u64,
        /// Generators per draw, e.g. `2..5`
        #[arg(long, value_parser = parse_range)]
        gen_count: Option<(u32, u32)>,
        /// Generator sizes, e.g. `3..=6`
        #[arg(long, value_parser = parse_range)]
        gen_size: Option<(u32, u32)>,
        #[arg(long, default_value_t = search::DEFAULT_MAX_FINDINGS)]
        max_findings: usize,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Recompute every stated property of the n = 9 counterexample family
    VerifyPaperExample {
        #[arg(long)]
        json: bool,
    },
    /// Print m, n, T(F), frequency and size profiles, abundant elements
    Stats {
        #[arg(long)]
        json: bool,
        file: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConjectureArg {
    Frankl,
    S1,
    S2,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SingleConjecture {
    Frankl,
    S1,
    S2,
}

impl From<SingleConjecture> for Conjecture {
    fn from(c: SingleConjecture) -> Self {
        match c {
            SingleConjecture::Frankl => Conjecture::Frankl,
            SingleConjecture::S1 => Conjecture::S1,
            SingleConjecture::S2 => Conjecture::S2,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Exhaustive,
    Random,
    Template,
}

fn parse_target(s: &str) -> Result<SearchTarget, String> {
    s.parse()
}

/// `A`, `A..B` (inclusive, as on the command line) or `A..=B`.
fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let bad = || format!("invalid range {s:?}");
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.trim_start_matches('=')),
        None => (s, s),
    };
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

/// Failure that maps straight to an exit code.
struct Exit {
    code: i32,
    message: String,
}

impl Exit {
    fn data(e: impl std::fmt::Display) -> Self {
        Exit {
            code: EXIT_DATA,
            message: e.to_string(),
        }
    }

    fn usage(e: impl std::fmt::Display) -> Self {
        Exit {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }

    fn internal(e: impl std::fmt::Display) -> Self {
        Exit {
            code: EXIT_INTERNAL,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Exit {
    fn from(e: std::io::Error) -> Self {
        Exit::internal(e)
    }
}

/// Errors from bad parameters are usage errors, everything else is internal.
fn classify(e: Error) -> Exit {
    match e {
        Error::EnumerationBound { .. }
        | Error::InvalidFilter(_)
        | Error::InvalidSearch(_)
        | Error::PartitionDepth { .. }
        | Error::GroundSizeOutOfRange(_) => Exit::usage(e),
        Error::CheckpointVersion { .. }
        | Error::CorruptCheckpoint(_)
        | Error::InfeasiblePrefix(_)
        | Error::Json(_) => Exit::data(e),
        other => Exit::internal(other),
    }
}

/// Parse `argv` (including the program name) and execute one subcommand.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "ucsc: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Exit> {
    match cmd {
        Command::Check {
            conjecture,
            json,
            strict_half,
            file,
        } => cmd_check(conjecture, json, strict_half, &file, out),
        Command::Closure { json, file } => {
            let f = read_family(&file)?.union_closure();
            if json {
                writeln!(out, "{}", family_to_json(&f))?;
            } else {
                write!(out, "{f}")?;
            }
            Ok(EXIT_OK)
        }
        Command::Enumerate {
            n,
            t_min,
            t_exact,
            canonical,
            count_only,
            check,
            checkpoint,
            threads,
            partition,
        } => {
            let filter = EnumFilter {
                t_min,
                t_exact,
                canonical_only: canonical,
                max_m: None,
            };
            let args = EnumerateArgs {
                n,
                filter,
                count_only,
                check: check.map(Conjecture::from),
                checkpoint,
                threads: threads.unwrap_or_else(default_threads),
                partition,
            };
            cmd_enumerate(args, out, err)
        }
        Command::Search {
            mode,
            n,
            target,
            seed,
            iters,
            gen_count,
            gen_size,
            max_findings,
            threads,
            json,
        } => {
            let threads = threads.unwrap_or_else(default_threads);
            let started = Instant::now();
            let outcome = match mode {
                Mode::Exhaustive => search::exhaustive_scan_with(
                    n,
                    &[target],
                    &ScanOptions {
                        threads,
                        max_findings,
                        rule: AbundanceRule::default(),
                    },
                )
                .map_err(classify)?,
                Mode::Random => {
                    let mut cfg = RandomSearch::new(n, target, seed, iters);
                    cfg.gen_size = default_gen_size(n, target);
                    if let Some((lo, hi)) = gen_count {
                        cfg.gen_count = (lo as usize, hi as usize);
                    }
                    if let Some(range) = gen_size {
                        cfg.gen_size = range;
                    }
                    cfg.max_findings = max_findings;
                    cfg.threads = threads;
                    cfg.run().map_err(classify)?
                }
                Mode::Template => {
                    if !(1..=ucsc_core::mask::MAX_N).contains(&n) {
                        return Err(Exit::usage(format!("n = {n} outside 1..=16")));
                    }
                    search::template_search(n, target)
                }
            };
            report_search(&outcome, json, started, out, err)
        }
        Command::VerifyPaperExample { json } => {
            let report = search::verify_paper_example();
            if json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&report).map_err(Exit::internal)?
                )?;
            } else {
                for c in &report.checks {
                    let tag = if c.pass { "ok  " } else { "FAIL" };
                    writeln!(out, "{tag} {:<13} {}", c.name, c.actual)?;
                    if !c.pass {
                        writeln!(out, "     expected      {}", c.expected)?;
                    }
                }
                writeln!(out, "{}", if report.passed { "all checks passed" } else { "MISMATCH" })?;
            }
            Ok(if report.passed { EXIT_OK } else { EXIT_INTERNAL })
        }
        Command::Stats { json, file } => cmd_stats(&read_family(&file)?, json, out),
    }
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Generator sizes that can produce instances of `target` at all.
fn default_gen_size(n: u32, target: SearchTarget) -> (u32, u32) {
    let lo = target.t_floor(n).unwrap_or(1).max(1);
    (lo.min(n.max(1)), n.max(1))
}

fn read_family(path: &Path) -> Result<SetFamily, Exit> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Exit::data(format!("{}: {e}", path.display())))?;
    parse_any(&text).map_err(|e| Exit::data(format!("{}: {e}", path.display())))
}

fn cmd_check(
    which: ConjectureArg,
    json: bool,
    strict_half: bool,
    file: &Path,
    out: &mut dyn Write,
) -> Result<i32, Exit> {
    let f = read_family(file)?;
    checkers::validate(&f).map_err(Exit::data)?;
    let rule = if strict_half {
        AbundanceRule::MoreThanHalf
    } else {
        AbundanceRule::AtLeastHalf
    };
    let conjectures: Vec<Conjecture> = match which {
        ConjectureArg::Frankl => vec![Conjecture::Frankl],
        ConjectureArg::S1 => vec![Conjecture::S1],
        ConjectureArg::S2 => vec![Conjecture::S2],
        ConjectureArg::All => Conjecture::ALL.to_vec(),
    };
    let verdicts: Vec<(Conjecture, Verdict)> = conjectures
        .into_iter()
        .map(|c| checkers::check_with_rule(&f, c, rule).map(|v| (c, v)))
        .collect::<Result<_, _>>()
        .map_err(Exit::data)?;

    if json {
        let reports: Vec<_> = verdicts.iter().map(|(c, v)| verdict_report(&f, *c, v)).collect();
        let value = if reports.len() == 1 {
            serde_json::to_value(&reports[0])
        } else {
            serde_json::to_value(&reports)
        }
        .map_err(Exit::internal)?;
        writeln!(out, "{value}")?;
    } else {
        let t = f.t_value().map_err(Exit::data)?;
        writeln!(out, "family: n={} m={} T(F)={t}", f.n(), f.m())?;
        for (c, v) in &verdicts {
            writeln!(out, "{c}: {v}")?;
        }
    }
    let statuses: Vec<Status> = verdicts.iter().map(|(_, v)| v.status()).collect();
    Ok(if statuses.contains(&Status::Fails) {
        EXIT_FAILS
    } else if statuses.contains(&Status::NotApplicable) {
        EXIT_NOT_APPLICABLE
    } else {
        EXIT_OK
    })
}

struct EnumerateArgs {
    n: u32,
    filter: EnumFilter,
    count_only: bool,
    check: Option<Conjecture>,
    checkpoint: Option<PathBuf>,
    threads: usize,
    partition: Option<usize>,
}

#[derive(Default)]
struct Tally {
    families: u64,
    failures: u64,
}

fn cmd_enumerate(args: EnumerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Exit> {
    if let Some(depth) = args.partition {
        for cp in enumeration::partition_tasks(args.n, depth).map_err(classify)? {
            writeln!(out, "{}", cp.to_json())?;
        }
        return Ok(EXIT_OK);
    }
    args.filter.validate(args.n).map_err(classify)?;
    let started = Instant::now();

    let tally_family = |f: &SetFamily, tally: &mut Tally| {
        tally.families += 1;
        if let Some(c) = args.check {
            if checkers::check(f, c).is_ok_and(|v| v.is_fail()) {
                tally.failures += 1;
            }
        }
    };

    let tally = if let Some(path) = &args.checkpoint {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Exit::data(format!("{}: {e}", path.display())))?;
        let cp = EnumCheckpoint::from_json(&text).map_err(classify)?;
        if cp.n != args.n {
            return Err(Exit::usage(format!(
                "checkpoint is for n = {}, not n = {}",
                cp.n, args.n
            )));
        }
        let mut tally = Tally::default();
        let mut io_result = Ok(());
        enumeration::resume(&cp, &args.filter, |f| {
            tally_family(f, &mut tally);
            if !args.count_only && args.check.is_none() && io_result.is_ok() {
                io_result = writeln!(out, "{}", family_to_json(f));
            }
        })
        .map_err(classify)?;
        io_result?;
        tally
    } else if args.count_only || args.check.is_some() {
        let parts = enumeration::map_partitions(
            args.n,
            enumeration::default_partition_depth(args.n),
            args.threads,
            |task| {
                let mut tally = Tally::default();
                enumeration::resume(task, &args.filter, |f| tally_family(f, &mut tally))?;
                Ok(tally)
            },
        )
        .map_err(classify)?;
        writeln!(err, "ucsc: {} subtree tasks on {} threads", parts.len(), args.threads)?;
        parts.into_iter().fold(Tally::default(), |acc, t| Tally {
            families: acc.families + t.families,
            failures: acc.failures + t.failures,
        })
    } else {
        let mut tally = Tally::default();
        let mut io_result = Ok(());
        enumeration::enumerate_union_closed(args.n, &args.filter, |f| {
            tally_family(f, &mut tally);
            if io_result.is_ok() {
                io_result = writeln!(out, "{}", family_to_json(f));
            }
        })
        .map_err(classify)?;
        io_result?;
        tally
    };

    let secs = started.elapsed().as_secs_f64();
    writeln!(
        err,
        "ucsc: {} families in {:.3}s ({:.0}/s)",
        tally.families,
        secs,
        tally.families as f64 / secs.max(1e-9)
    )?;
    if args.count_only {
        writeln!(out, "{}", tally.families)?;
    }
    if let Some(c) = args.check {
        writeln!(out, "{c}: {} checked, {} failing", tally.families, tally.failures)?;
        if tally.failures > 0 {
            return Ok(EXIT_FAILS);
        }
    }
    Ok(EXIT_OK)
}

fn report_search(
    outcome: &SearchOutcome,
    json: bool,
    started: Instant,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Exit> {
    writeln!(
        err,
        "ucsc: examined {} families in {:.3}s, {} findings ({} suppressed)",
        outcome.examined,
        started.elapsed().as_secs_f64(),
        outcome.findings.len(),
        outcome.suppressed
    )?;
    for finding in &outcome.findings {
        if json {
            writeln!(out, "{}", finding.to_json_line())?;
        } else {
            let members: Vec<String> = finding
                .family
                .members()
                .iter()
                .map(|m| m.to_string())
                .collect();
            writeln!(
                out,
                "{} n={} m={} T(F)={}: {} [{}]",
                finding.target,
                finding.family.n(),
                finding.family.m(),
                finding.family.t_value().map_or(0, |t| t),
                finding.verdict,
                members.join(" ")
            )?;
        }
    }
    if !json {
        writeln!(
            out,
            "{} findings ({} suppressed) over {} families",
            outcome.findings.len(),
            outcome.suppressed,
            outcome.examined
        )?;
    }
    Ok(if outcome.findings.is_empty() {
        EXIT_OK
    } else {
        EXIT_FAILS
    })
}

fn cmd_stats(f: &SetFamily, json: bool, out: &mut dyn Write) -> Result<i32, Exit> {
    let t = f.t_value().ok();
    let freq = f.frequency_profile().counts;
    let sizes = f.size_profile().by_size;
    let abundant: Vec<u32> = f.abundant_elements().iter().map(|e| e.get()).collect();
    if json {
        let value = serde_json::json!({
            "m": f.m(),
            "n": f.n(),
            "t_value": t,
            "union_closed": f.is_union_closed(),
            "frequencies": freq,
            "size_profile": sizes,
            "abundant": abundant,
        });
        writeln!(out, "{value}")?;
    } else {
        writeln!(out, "m = {}", f.m())?;
        writeln!(out, "n = {}", f.n())?;
        match t {
            Some(t) => writeln!(out, "T(F) = {t}")?,
            None => writeln!(out, "T(F) = undefined (no nonempty member)")?,
        }
        writeln!(out, "union-closed = {}", f.is_union_closed())?;
        writeln!(out, "frequencies = {freq:?}")?;
        writeln!(out, "size profile = {sizes:?}")?;
        writeln!(out, "abundant = {abundant:?}")?;
    }
    Ok(EXIT_OK)
}
