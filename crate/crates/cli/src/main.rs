//! Command-line front end: batch access to terms, verification, theorem
//! checks, composition analysis, remainder cycles, searches and b-file
//! crosschecks.
//!
//! Exit codes: 0 success/verified, 1 rejection/counterexample/mismatch,
//! 2 usage, 3 exhausted cap or budget.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use revgcd::proofkit::{case_trace, verify_long_solution_theorem};
use revgcd::residue::{class_sums, remainder_cycle};
use revgcd::search::{
    analyze_compositions, single_class_scan, smallest_solution, verify_solution, SearchConfig,
    SearchMode, SearchOutcome, SolutionRecord, Verdict,
};
use revgcd::sequence::{crosscheck_bfile, modulus_index, TermEntry, TermStatus, TermStore};
use revgcd::{DigitString, Error};

const EXIT_OK: u8 = 0;
const EXIT_REJECTED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;

#[derive(Parser)]
#[command(name = "revgcd", version, about = "Smallest binary-like numbers whose gcd with their digit reversal equals their digit sum (A348480)")]
struct Cli {
    /// Output format: human text or one machine-readable record per line.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Lines,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Brute,
    Pruned,
    #[value(alias = "single_class")]
    SingleClass,
}

impl From<Mode> for SearchMode {
    fn from(m: Mode) -> SearchMode {
        match m {
            Mode::Brute => SearchMode::Brute,
            Mode::Pruned => SearchMode::Pruned,
            Mode::SingleClass => SearchMode::SingleClass,
        }
    }
}

#[derive(Args)]
struct SearchFlags {
    /// Candidate length cap in digits.
    #[arg(long, default_value_t = 80)]
    max_digits: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Wall-clock budget in seconds (0 = unlimited).
    #[arg(long, default_value_t = 0)]
    budget_secs: u64,
}

impl SearchFlags {
    fn config(&self, mode: SearchMode, class: Option<usize>) -> SearchConfig {
        SearchConfig {
            max_digits: self.max_digits,
            mode,
            class_hint: class,
            workers: self.workers.max(1),
            time_budget: (self.budget_secs > 0).then(|| Duration::from_secs(self.budget_secs)),
            progress: Some(progress_hook()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the n-th term (or the term for a given modulus x).
    Term {
        /// 1-based sequence index.
        n: Option<u64>,
        /// Modulus instead of index (mutually exclusive with n).
        #[arg(long)]
        x: Option<u64>,
        /// Term cache file.
        #[arg(long, env = "REVGCD_CACHE")]
        cache: Option<PathBuf>,
        #[command(flatten)]
        search: SearchFlags,
    },
    /// Check a digit string against the solution conditions for x.
    Verify { digits: String, x: u64 },
    /// Machine-check the long-solution theorem for x against a cofactor.
    Prove {
        x: u64,
        cofactor: u64,
        /// Also list every feasible composition.
        #[arg(long)]
        list: bool,
    },
    /// Feasible class-sum compositions for x with minimal-length implications.
    Analyze { x: u64 },
    /// Print the remainder cycle of powers of ten mod x.
    Cycle { x: u64 },
    /// Search for the smallest solution with explicit mode control.
    Search {
        #[arg(long)]
        x: u64,
        #[arg(long, value_enum, default_value_t = Mode::Pruned)]
        mode: Mode,
        /// Residue class for single-class mode.
        #[arg(long)]
        class: Option<usize>,
        #[command(flatten)]
        search: SearchFlags,
    },
    /// Compare a b-file against locally computed terms.
    Crosscheck {
        bfile: PathBuf,
        #[arg(long, env = "REVGCD_CACHE")]
        cache: Option<PathBuf>,
        #[command(flatten)]
        search: SearchFlags,
    },
}

fn progress_hook() -> Arc<dyn Fn(u64) + Send + Sync> {
    let last = AtomicU64::new(0);
    Arc::new(move |examined| {
        let prev = last.load(Ordering::Relaxed);
        if examined.saturating_sub(prev) >= 1 << 22 {
            last.store(examined, Ordering::Relaxed);
            eprintln!("... examined {} candidates", examined);
        }
    })
}

fn main() -> ExitCode {
    // Consumers are scripts; dying quietly on a closed pipe beats a panic.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::CacheFormat { .. } => EXIT_REJECTED,
        _ => EXIT_USAGE,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let format = cli.format;
    match cli.command {
        Command::Term { n, x, cache, search } => cmd_term(format, n, x, cache, &search),
        Command::Verify { digits, x } => cmd_verify(format, &digits, x),
        Command::Prove { x, cofactor, list } => cmd_prove(format, x, cofactor, list),
        Command::Analyze { x } => cmd_analyze(format, x),
        Command::Cycle { x } => cmd_cycle(format, x),
        Command::Search { x, mode, class, search } => cmd_search(format, x, mode, class, &search),
        Command::Crosscheck { bfile, cache, search } => cmd_crosscheck(format, &bfile, cache, &search),
    }
}

fn open_store(cache: Option<PathBuf>) -> Result<TermStore, Error> {
    match cache {
        Some(path) => TermStore::open(path),
        None => Ok(TermStore::in_memory()),
    }
}

fn print_term(format: Format, t: &TermEntry) {
    let digits = t.digits.as_ref().map_or("-".to_string(), |d| d.to_string());
    let encoded = t.encoded.as_ref().map_or("-".to_string(), |v| v.to_string());
    match format {
        Format::Text => {
            println!("n {}", t.index);
            println!("x {}", t.modulus);
            println!("digits {}", digits);
            println!("encoded {}", encoded);
            println!("status {}", t.status);
        }
        Format::Lines => {
            println!("{}\t{}\t{}\t{}\t{}", t.index, t.modulus, digits, encoded, t.status);
        }
    }
}

fn cmd_term(
    format: Format,
    n: Option<u64>,
    x: Option<u64>,
    cache: Option<PathBuf>,
    flags: &SearchFlags,
) -> Result<u8, Error> {
    let n = match (n, x) {
        (Some(n), None) if n >= 1 => n,
        (None, Some(x)) => modulus_index(x)?,
        _ => {
            eprintln!("error: give exactly one of a sequence index or --x");
            return Ok(EXIT_USAGE);
        }
    };
    let cfg = flags.config(SearchMode::Pruned, None);
    let bound_to_file = cache.is_some();
    let mut store = open_store(cache)?;
    let entry = store.term(n, &cfg)?;
    if bound_to_file {
        store.save()?;
    }
    print_term(format, &entry);
    match entry.status {
        TermStatus::Verified => Ok(EXIT_OK),
        _ => Ok(EXIT_EXHAUSTED),
    }
}

fn print_record(format: Format, rec: &SolutionRecord) -> Result<(), Error> {
    let encoded = rec.digits.base2_value()?;
    let sums = class_sums(&rec.digits, remainder_cycle(rec.modulus).map(|c| c.order()).unwrap_or(1));
    match format {
        Format::Text => {
            println!("accepted");
            println!("{}", rec);
            println!("class_sums {}", sums);
            println!("encoded {}", encoded);
        }
        Format::Lines => {
            println!(
                "accepted\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                rec.modulus,
                rec.digits,
                rec.length,
                rec.digit_sum,
                rec.zero_count,
                if rec.long { "long" } else { "short" },
                rec.gcd,
                sums,
                encoded,
            );
        }
    }
    Ok(())
}

fn cmd_verify(format: Format, digits: &str, x: u64) -> Result<u8, Error> {
    let d: DigitString = digits.parse()?;
    match verify_solution(&d, x)? {
        Verdict::Accepted(rec) => {
            print_record(format, &rec)?;
            Ok(EXIT_OK)
        }
        Verdict::Rejected(rej) => {
            match format {
                Format::Text => {
                    println!("rejected");
                    println!("reason {}", rej);
                    println!("digit_sum {}", rej.digit_sum);
                    println!("gcd {}", rej.gcd);
                }
                Format::Lines => {
                    println!("rejected\t{}\t{}\t{}\t{}", x, d, rej.digit_sum, rej.gcd);
                }
            }
            Ok(EXIT_REJECTED)
        }
    }
}

fn cmd_prove(format: Format, x: u64, cofactor: u64, list: bool) -> Result<u8, Error> {
    let report = verify_long_solution_theorem(x, cofactor)?;
    match format {
        Format::Text => {
            println!("{}", report);
            if list {
                println!("feasible compositions:");
                for (p, class) in &report.feasible {
                    println!("  {} {:?}", p, class);
                }
            }
            if let Ok(trace) = case_trace(x) {
                println!("{}", trace);
            }
        }
        Format::Lines => {
            println!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                report.modulus,
                report.cofactor,
                report.total_compositions,
                report.feasible_count(),
                report.count(revgcd::proofkit::CompositionClass::SingleClass),
                report.count(revgcd::proofkit::CompositionClass::CofactorDivisible),
                report.counterexamples.len(),
            );
            if list {
                for (p, class) in &report.feasible {
                    println!("{}\t{:?}", p, class);
                }
            }
        }
    }
    if report.verified() {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_REJECTED)
    }
}

fn cmd_analyze(format: Format, x: u64) -> Result<u8, Error> {
    let analysis = analyze_compositions(x)?;
    match format {
        Format::Text => {
            println!(
                "x {} order {} feasible {}",
                analysis.modulus,
                analysis.order,
                analysis.rows.len()
            );
            for row in &analysis.rows {
                let eliminated = row
                    .eliminated_by
                    .map_or("-".to_string(), |y| format!("cofactor {}", y));
                let min_len = row.min_length.map_or("-".to_string(), |l| l.to_string());
                println!(
                    "{} single_class={} eliminated={} min_length={}",
                    row.composition,
                    if row.single_class { "yes" } else { "no" },
                    eliminated,
                    min_len,
                );
            }
            match analysis.minimal_length() {
                Some(l) => println!("minimal feasible length {}", l),
                None => println!("no realizable composition"),
            }
        }
        Format::Lines => {
            for row in &analysis.rows {
                println!(
                    "{}\t{}\t{}\t{}",
                    row.composition,
                    row.single_class,
                    row.eliminated_by.map_or("-".to_string(), |y| y.to_string()),
                    row.min_length.map_or("-".to_string(), |l| l.to_string()),
                );
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_cycle(format: Format, x: u64) -> Result<u8, Error> {
    let cycle = remainder_cycle(x)?;
    let joined: Vec<String> = cycle.remainders().iter().map(u64::to_string).collect();
    match format {
        Format::Text => {
            println!("x {}", cycle.modulus());
            println!("order {}", cycle.order());
            println!("cycle {}", joined.join(" "));
        }
        Format::Lines => {
            println!("{}\t{}\t{}", cycle.modulus(), cycle.order(), joined.join(","));
        }
    }
    Ok(EXIT_OK)
}

fn cmd_search(
    format: Format,
    x: u64,
    mode: Mode,
    class: Option<usize>,
    flags: &SearchFlags,
) -> Result<u8, Error> {
    let cfg = flags.config(mode.into(), class);
    if mode == Mode::SingleClass && class.is_none() {
        // scan every class and report the minimal find
        let report = single_class_scan(x, &cfg)?;
        match format {
            Format::Text => println!("{}", report),
            Format::Lines => {
                for c in &report.classes {
                    match c.outcome.record() {
                        Some(r) => println!("{}\tfound\t{}\t{}", c.class, r.length, r.digits),
                        None => println!("{}\tnone\t-\t-", c.class),
                    }
                }
            }
        }
        return match report.minimal() {
            Some(_) => Ok(EXIT_OK),
            None => Ok(EXIT_EXHAUSTED),
        };
    }
    match smallest_solution(x, &cfg)? {
        SearchOutcome::Found(rec) => {
            print_record(format, &rec)?;
            Ok(EXIT_OK)
        }
        SearchOutcome::Exhausted { max_digits } => {
            println!("exhausted\tmax_digits={}", max_digits);
            Ok(EXIT_EXHAUSTED)
        }
        SearchOutcome::BudgetExceeded { elapsed } => {
            println!("budget_exceeded\telapsed={:?}", elapsed);
            Ok(EXIT_EXHAUSTED)
        }
    }
}

fn cmd_crosscheck(
    format: Format,
    bfile: &PathBuf,
    cache: Option<PathBuf>,
    flags: &SearchFlags,
) -> Result<u8, Error> {
    let text = std::fs::read_to_string(bfile)?;
    let mut store = open_store(cache)?;
    let cfg = flags.config(SearchMode::Pruned, None);
    let report = crosscheck_bfile(&text, &mut store, &cfg);
    match format {
        Format::Text => println!("{}", report),
        Format::Lines => {
            for row in &report.rows {
                let (kind, detail) = match &row.outcome {
                    revgcd::sequence::CrosscheckOutcome::Match => ("match", String::new()),
                    revgcd::sequence::CrosscheckOutcome::Mismatch { local, bfile } => {
                        ("mismatch", format!("local={} bfile={}", local, bfile))
                    }
                    revgcd::sequence::CrosscheckOutcome::Skipped { reason } => {
                        ("skipped", reason.clone())
                    }
                };
                println!("{}\t{}\t{}\t{}", row.index, row.modulus, kind, detail);
            }
        }
    }
    if report.fully_agrees() {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_REJECTED)
    }
}
