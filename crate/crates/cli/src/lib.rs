//! `ellgood` command-line frontend.
//!
//! Exit codes: 0 success / exists / verified good, 1 verified not good or
//! proven nonexistent, 2 usage or input error, 3 inconclusive, 4 internal
//! invariant violation.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand};
use ellgood_core::analysis::{general_bound, nonexistence_ceiling, refined_bound, type_counts};
use ellgood_core::design::{self, Construction, Permutation, SteinerTripleSystem};
use ellgood_core::search::{max_ell, search_sequencing, SearchConfig, SearchError, SearchOutcome, SearchVerdict};
use ellgood_core::sequencer::{sequence_with, SequenceError, SequenceOptions, SwapAction};
use ellgood_core::{is_ell_good, Verdict};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "ellgood", version, about = "Steiner triple systems and l-good sequencings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Construct a Steiner triple system.
    Gen {
        #[arg(long)]
        v: usize,
        #[arg(long, default_value = "auto")]
        construction: Construction,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Construct an ell-good sequencing of a system.
    Sequence {
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
        ell: u32,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Attempt orders below the guaranteed bound.
        #[arg(long)]
        best_effort: bool,
        /// Fall back to exhaustive search when construction fails.
        #[arg(long)]
        search_fallback: bool,
    },
    /// Check permutations for ell-goodness.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
        ell: u32,
        #[arg(short, long)]
        input: PathBuf,
        /// Permutation file; without it, one permutation per line on stdin.
        #[arg(long)]
        perm: Option<PathBuf>,
    },
    /// Exhaustive search for a sequencing.
    Search(SearchArgs),
    /// Existence bounds per ell, or the nonexistence ceiling for an order.
    Bounds(BoundsArgs),
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(3..), required_unless_present = "max_ell")]
    ell: Option<u32>,
    #[arg(short, long)]
    input: PathBuf,
    /// Find the largest ell with a sequencing.
    #[arg(long)]
    max_ell: bool,
    /// Node budget per search.
    #[arg(long, default_value_t = 1_000_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Do not fix the first point even when the system allows it.
    #[arg(long)]
    no_fix_first: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("what").required(true).args(["ell", "v"])))]
struct BoundsArgs {
    /// A single ell or an inclusive range `A-B`.
    #[arg(long)]
    ell: Option<EllRange>,
    #[arg(long)]
    v: Option<usize>,
    #[arg(long, conflicts_with = "refined_only")]
    general_only: bool,
    #[arg(long)]
    refined_only: bool,
}

#[derive(Debug, Clone)]
struct EllRange(RangeInclusive<usize>);

impl FromStr for EllRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{t}` is not a number"))
        };
        let (a, b) = match s.split_once('-') {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let a = parse(s)?;
                (a, a)
            }
        };
        if a < 3 || b < a {
            return Err(format!("`{s}`: need 3 <= A <= B"));
        }
        Ok(EllRange(a..=b))
    }
}

/// Error carrying the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Gen {
            v,
            construction,
            output,
        } => gen(v, construction, output.as_deref(), out),
        Command::Sequence {
            ell,
            input,
            output,
            best_effort,
            search_fallback,
        } => sequence_cmd(
            ell as usize,
            &input,
            output.as_deref(),
            best_effort,
            search_fallback,
            out,
            err,
        ),
        Command::Verify { ell, input, perm } => verify(ell as usize, &input, perm.as_deref(), stdin, out),
        Command::Search(args) => search_cmd(&args, out, err),
        Command::Bounds(args) => bounds(&args, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn io_fail(e: std::io::Error) -> Failure {
    Failure::usage(e)
}

fn load_sts(path: &Path) -> Result<SteinerTripleSystem, Failure> {
    let file = File::open(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    design::load_system(BufReader::new(file)).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_to(path: Option<&Path>, out: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            body(&mut w).map_err(io_fail)?;
            w.flush().map_err(io_fail)
        }
        None => body(out).map_err(io_fail),
    }
}

fn gen(v: usize, how: Construction, output: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let sts = design::construct(v, how).map_err(Failure::usage)?;
    write_to(output, out, |w| {
        design::save_system(&sts, w).map_err(|e| std::io::Error::other(e.to_string()))
    })?;
    Ok(EXIT_OK)
}

fn sequence_cmd(
    ell: usize,
    input: &Path,
    output: Option<&Path>,
    best_effort: bool,
    search_fallback: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let sts = load_sts(input)?;
    let result = sequence_with(&sts, ell, SequenceOptions { best_effort });
    let seq = match result {
        Ok(seq) => seq,
        Err(
            e @ (SequenceError::OrderTooSmall { .. }
            | SequenceError::GreedyStuck { .. }),
        ) => {
            if !search_fallback {
                writeln!(err, "error: {e}").map_err(io_fail)?;
                return Ok(EXIT_INCONCLUSIVE);
            }
            writeln!(err, "construction failed ({e}); searching").map_err(io_fail)?;
            let outcome = search_sequencing(&sts, ell, &SearchConfig::default());
            return report_search(&sts, ell, outcome, output, out, err);
        }
        Err(e @ SequenceError::InvalidEll(_)) => return Err(Failure::usage(e)),
        Err(e) => {
            return Err(Failure {
                code: EXIT_INTERNAL,
                message: e.to_string(),
            })
        }
    };
    recheck(&sts, &seq.permutation, ell)?;
    writeln!(
        err,
        "segments {}, gap {}, core swaps {}",
        seq.layout.segments.len(),
        seq.layout.gap.len(),
        seq.core_swaps()
    )
    .map_err(io_fail)?;
    let perm = &seq.permutation;
    write_to(output, out, |w| writeln!(w, "{perm}"))?;
    for r in &seq.swaps {
        let what = match r.action {
            SwapAction::Kept => "kept".to_string(),
            SwapAction::WithLeftover(j) => format!("leftover {j}"),
            SwapAction::WithCore(p) => format!("core position {}", p + 1),
        };
        writeln!(out, "# swap {} {} -> {}", r.index, what, r.placed).map_err(io_fail)?;
    }
    Ok(EXIT_OK)
}

fn recheck(sts: &SteinerTripleSystem, perm: &Permutation, ell: usize) -> Result<(), Failure> {
    match is_ell_good(sts, perm, ell) {
        Ok(Verdict::Good) => Ok(()),
        other => Err(Failure {
            code: EXIT_INTERNAL,
            message: format!("produced sequencing failed verification: {other:?}"),
        }),
    }
}

fn report_search(
    sts: &SteinerTripleSystem,
    ell: usize,
    outcome: Result<SearchOutcome, SearchError>,
    output: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    match outcome {
        Ok(o) => {
            writeln!(
                err,
                "elapsed {:.3}s, first point fixed: {}",
                o.elapsed.as_secs_f64(),
                o.symmetry_applied
            )
            .map_err(io_fail)?;
            match &o.verdict {
                SearchVerdict::Found(perm) => {
                    recheck(sts, perm, ell)?;
                    write_to(output, out, |w| writeln!(w, "{perm}"))?;
                    writeln!(out, "# found, nodes {}", o.nodes_visited).map_err(io_fail)?;
                    Ok(EXIT_OK)
                }
                SearchVerdict::None => {
                    writeln!(out, "none\nnodes {}", o.nodes_visited).map_err(io_fail)?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Err(SearchError::BudgetExhausted { ell, nodes }) => {
            writeln!(out, "inconclusive\nnodes {nodes}").map_err(io_fail)?;
            writeln!(err, "node budget exhausted at ell = {ell}").map_err(io_fail)?;
            Ok(EXIT_INCONCLUSIVE)
        }
        Err(e @ SearchError::Unverified) => Err(Failure {
            code: EXIT_INTERNAL,
            message: e.to_string(),
        }),
        Err(e) => Err(Failure::usage(e)),
    }
}

fn verify(ell: usize, input: &Path, perm: Option<&Path>, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Outcome {
    let sts = load_sts(input)?;
    let perms = match perm {
        Some(p) => {
            let file = File::open(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
            vec![design::load_permutation(BufReader::new(file))
                .map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?]
        }
        None => design::load_permutations(stdin).map_err(|e| Failure::usage(format!("stdin: {e}")))?,
    };
    let mut all_good = true;
    for p in &perms {
        match is_ell_good(&sts, p, ell).map_err(Failure::usage)? {
            Verdict::Good => {
                let c = type_counts(&sts, p, ell).map_err(Failure::usage)?;
                writeln!(out, "good b0={} b1={} b2={} b3={}", c.b0, c.b1, c.b2, c.b3).map_err(io_fail)?;
            }
            Verdict::Bad(w) => {
                all_good = false;
                writeln!(
                    out,
                    "bad block {} within positions {}..{}",
                    w.block,
                    w.window_start + 1,
                    w.window_start + w.spread + 1
                )
                .map_err(io_fail)?;
            }
        }
    }
    Ok(if all_good { EXIT_OK } else { EXIT_NEGATIVE })
}

fn search_cmd(args: &SearchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let sts = load_sts(&args.input)?;
    let config = SearchConfig {
        node_budget: Some(args.budget),
        symmetry_fixing: !args.no_fix_first,
        jobs: args.jobs as usize,
    };
    if !args.max_ell {
        let ell = args.ell.expect("required by clap") as usize;
        return report_search(&sts, ell, search_sequencing(&sts, ell, &config), None, out, err);
    }
    match max_ell(&sts, &config) {
        Ok(report) => {
            for (ell, o) in &report.outcomes {
                let verdict = if o.found().is_some() { "found" } else { "none" };
                writeln!(out, "ell {ell} {verdict} nodes {}", o.nodes_visited).map_err(io_fail)?;
            }
            match report.best {
                Some(best) => {
                    writeln!(out, "max_ell {best}").map_err(io_fail)?;
                    Ok(EXIT_OK)
                }
                None => {
                    writeln!(out, "max_ell none").map_err(io_fail)?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Err(SearchError::BudgetExhausted { ell, nodes }) => {
            writeln!(out, "inconclusive at ell {ell}\nnodes {nodes}").map_err(io_fail)?;
            Ok(EXIT_INCONCLUSIVE)
        }
        Err(e) => Err(Failure::usage(e)),
    }
}

fn bounds(args: &BoundsArgs, out: &mut dyn Write) -> Outcome {
    if let Some(v) = args.v {
        let ceiling = nonexistence_ceiling(v).map_err(Failure::usage)?;
        writeln!(out, "v\tceiling\n{v}\t{ceiling}").map_err(io_fail)?;
        return Ok(EXIT_OK);
    }
    let range = args.ell.clone().expect("group requires ell or v").0;
    let (general, refined) = (!args.refined_only, !args.general_only);
    let mut header = vec!["ell"];
    if general {
        header.push("general");
    }
    if refined {
        header.push("refined");
    }
    writeln!(out, "{}", header.join("\t")).map_err(io_fail)?;
    for ell in range {
        let mut row = vec![ell.to_string()];
        if general {
            row.push(general_bound(ell).to_string());
        }
        if refined {
            row.push(refined_bound(ell).to_string());
        }
        writeln!(out, "{}", row.join("\t")).map_err(io_fail)?;
    }
    Ok(EXIT_OK)
}
