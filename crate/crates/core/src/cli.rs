//! Command-line surface. [`run_cli`] does all the work against arbitrary
//! writers so the binary stays a one-liner and tests can drive it directly.
//!
//! Exit codes: 0 success (including inconclusive probes), 1 I/O error,
//! 2 usage error, 3 verification defect.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::arith::{parse_nat, Nat};
use crate::maps::MapKind;
use crate::orbit::{ksequence, run, Budget, KEnd, OrbitOutcome, DEFAULT_MAX_BITS, DEFAULT_MAX_STEPS};
use crate::scan::{scan_range_in, RecordFormat, RecordWriter, ScanRecord};
use crate::theorems::{lemma1_cycle, mersenne_seed, probe_conjecture, run_suite, Suite, SuiteBounds};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEFECT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "quadcollatz", version, about = "Exact orbits of quadratic Collatz-type maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a single orbit and classify it.
    Orbit(OrbitArgs),
    /// Classify every start in a range.
    Scan(ScanArgs),
    /// Print the m-cycles of q.
    Cycles(CyclesArgs),
    /// Run a verification suite: lemma1, lemma2, chain, odom or all.
    Verify(VerifyArgs),
    /// Gather budgeted evidence about a start value under q.
    Probe(ProbeArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Summary,
    Jsonl,
    Csv,
}

#[derive(Debug, Args)]
struct BudgetArgs {
    #[arg(long = "max-steps", default_value_t = DEFAULT_MAX_STEPS,
          value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,
    #[arg(long = "max-bits", default_value_t = DEFAULT_MAX_BITS,
          value_parser = clap::value_parser!(u64).range(1..))]
    max_bits: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget::new(self.max_steps, self.max_bits).expect("clap enforces positive limits")
    }
}

fn nat_arg(s: &str) -> Result<Nat, String> {
    parse_nat(s).map_err(|e| e.to_string())
}

fn map_arg(s: &str) -> Result<MapKind, String> {
    s.parse().map_err(|e: crate::maps::UnknownMap| e.to_string())
}

#[derive(Debug, Args)]
struct OrbitArgs {
    #[arg(value_parser = nat_arg)]
    n: Nat,
    #[arg(long, default_value = "q", value_parser = map_arg)]
    map: MapKind,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, value_enum, default_value = "summary")]
    format: Format,
    /// Print every iterate.
    #[arg(long)]
    trace: bool,
    /// Print the k-sequence stages (q and s only).
    #[arg(long)]
    kseq: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, default_value = "q", value_parser = map_arg)]
    map: MapKind,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, value_parser = nat_arg)]
    from: Nat,
    #[arg(long, value_parser = nat_arg)]
    to: Nat,
    /// Worker threads (default: available parallelism).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "jsonl")]
    format: Format,
}

#[derive(Debug, Args)]
struct CyclesArgs {
    #[arg(long = "m-from", default_value_t = 1)]
    m_from: u64,
    #[arg(long = "m-to", default_value_t = 10)]
    m_to: u64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_parser = |s: &str| s.parse::<Suite>())]
    suite: Suite,
    #[arg(long = "m-from")]
    m_from: Option<u64>,
    #[arg(long = "m-to")]
    m_to: Option<u64>,
    /// Largest odd k for the odom suite.
    #[arg(long = "k-to")]
    k_to: Option<u64>,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    #[arg(long, value_parser = nat_arg, conflicts_with = "m")]
    start: Option<Nat>,
    /// Probe 2^m − 1 (default m = 3 when no start is given).
    #[arg(long)]
    m: Option<u64>,
    #[arg(long, default_value = "q", value_parser = map_arg)]
    map: MapKind,
    #[command(flatten)]
    budget: BudgetArgs,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Orbit(a) => cmd_orbit(a, stdout, stderr),
        Command::Scan(a) => cmd_scan(a, stdout, stderr),
        Command::Cycles(a) => cmd_cycles(a, stdout, stderr),
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::Probe(a) => cmd_probe(a, stdout, stderr),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_IO
        }
    }
}

fn usage(stderr: &mut dyn Write, msg: &str) -> io::Result<i32> {
    writeln!(stderr, "error: {msg}")?;
    Ok(EXIT_USAGE)
}

/// Opens `--out` or falls back to stdout. `Err` carries the exit code.
fn open_out<'a>(
    path: &Option<PathBuf>,
    stdout: &'a mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Box<dyn Write + 'a>, i32> {
    match path {
        None => Ok(Box::new(stdout)),
        Some(p) => match File::create(p) {
            Ok(f) => Ok(Box::new(BufWriter::new(f))),
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", p.display());
                Err(EXIT_IO)
            }
        },
    }
}

fn summary_line(outcome: &OrbitOutcome) -> String {
    match outcome {
        OrbitOutcome::Zero { steps } => format!("zero steps={steps}"),
        OrbitOutcome::Cycle { length, odd_element, entry_step } => {
            format!("cycle len={length} entry={entry_step} odd={odd_element}")
        }
        OrbitOutcome::BudgetExceeded { reason, steps_done, peak_bits } => {
            format!("budget reason={} steps={steps_done} peak_bits={peak_bits}", reason.tag())
        }
    }
}

fn cmd_orbit(a: OrbitArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> io::Result<i32> {
    if a.kseq && !matches!(a.map, MapKind::Q | MapKind::S) {
        return usage(stderr, "--kseq is only available for --map q and --map s");
    }
    let budget = a.budget.budget();
    let mut out = match open_out(&a.out, stdout, stderr) {
        Ok(w) => w,
        Err(code) => return Ok(code),
    };
    let (outcome, trace) = run(a.map, &a.n, budget, a.trace);

    if let Some(iterates) = &trace.iterates {
        for (i, x) in iterates.iter().enumerate() {
            writeln!(out, "{i} {x}")?;
        }
    }
    if a.kseq {
        let seq = ksequence(a.map, &a.n, budget).map_err(io::Error::other)?;
        for st in &seq.stages {
            writeln!(
                out,
                "stage p={} m={} k={} value={} low={}",
                st.stage, st.m, st.k, st.value, st.low_point
            )?;
        }
        let end = match seq.end {
            KEnd::Cycle { length } => format!("cycle len={length}"),
            KEnd::Zero => "zero".to_owned(),
            KEnd::Budget(r) => format!("budget reason={}", r.tag()),
        };
        writeln!(out, "kseq stages={} end={end}", seq.stages.len())?;
    }
    match a.format {
        Format::Summary => writeln!(out, "{}", summary_line(&outcome))?,
        Format::Jsonl | Format::Csv => {
            let format = if matches!(a.format, Format::Csv) { RecordFormat::Csv } else { RecordFormat::Jsonl };
            let mut w = RecordWriter::new(&mut out, format);
            w.write(&ScanRecord::new(&a.n, a.map, &outcome, trace.peak_bits))?;
            w.finish()?;
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn cmd_scan(a: ScanArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> io::Result<i32> {
    if a.from > a.to {
        return usage(stderr, "--from must not exceed --to");
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = a.jobs {
        pool = pool.num_threads(jobs as usize);
    }
    let pool = pool.build().map_err(io::Error::other)?;
    let budget = a.budget.budget();

    let mut out = match open_out(&a.out, stdout, stderr) {
        Ok(w) => w,
        Err(code) => return Ok(code),
    };
    match a.format {
        Format::Summary => {
            let s = scan_range_in(Some(&pool), a.map, &a.from, &a.to, budget, |_| Ok(()))?;
            writeln!(out, "scan map={} from={} to={} {s}", a.map, a.from, a.to)?;
        }
        Format::Jsonl | Format::Csv => {
            let format = if matches!(a.format, Format::Csv) { RecordFormat::Csv } else { RecordFormat::Jsonl };
            let mut w = RecordWriter::new(&mut out, format);
            let s = scan_range_in(Some(&pool), a.map, &a.from, &a.to, budget, |r| w.write(r))?;
            w.finish()?;
            writeln!(stderr, "scan map={} from={} to={} {s}", a.map, a.from, a.to)?;
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn cmd_cycles(a: CyclesArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> io::Result<i32> {
    if a.m_from < 1 || a.m_from > a.m_to {
        return usage(stderr, "need 1 <= --m-from <= --m-to");
    }
    for m in a.m_from..=a.m_to {
        match lemma1_cycle(m) {
            Ok(c) => {
                let elems: Vec<String> = c.elements.iter().map(ToString::to_string).collect();
                writeln!(stdout, "m={m} [{}]", elems.join(", "))?;
            }
            Err(e) => {
                writeln!(stderr, "defect: {e}")?;
                return Ok(EXIT_DEFECT);
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(a: VerifyArgs, stdout: &mut dyn Write) -> io::Result<i32> {
    let bounds = SuiteBounds {
        m_from: a.m_from,
        m_to: a.m_to,
        k_to: a.k_to,
    };
    let results = run_suite(a.suite, bounds);
    let mut passed = 0;
    for r in &results {
        match &r.result {
            Ok(detail) => {
                passed += 1;
                writeln!(stdout, "PASS {} {} {detail}", r.suite, r.case)?;
            }
            Err(e) => writeln!(stdout, "FAIL {} {} {e}", r.suite, r.case)?,
        }
    }
    writeln!(stdout, "{passed}/{} passed", results.len())?;
    Ok(if passed == results.len() { EXIT_OK } else { EXIT_DEFECT })
}

fn cmd_probe(a: ProbeArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> io::Result<i32> {
    if a.map != MapKind::Q {
        return usage(stderr, "probes are only defined for --map q");
    }
    let start = a.start.unwrap_or_else(|| mersenne_seed(a.m.unwrap_or(3)));
    let r = probe_conjecture(a.map, &start, a.budget.budget()).map_err(io::Error::other)?;
    writeln!(stdout, "start: {}", r.start)?;
    writeln!(stdout, "map: {}", a.map)?;
    writeln!(stdout, "stages_with_k_gt_1: {}", r.stages_with_k_gt_1)?;
    match &r.certified_growth_bound {
        Some(b) => writeln!(stdout, "certified_growth_bound: {b}")?,
        None => writeln!(stdout, "certified_growth_bound: none")?,
    }
    writeln!(stdout, "peak_bits: {}", r.peak_bits)?;
    writeln!(stdout, "steps: {}", r.steps)?;
    writeln!(stdout, "verdict: {}", r.verdict)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("quadcollatz").chain(args.iter().copied());
        let code = run_cli(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn orbit_summaries() {
        assert_eq!(call(&["orbit", "20", "--map", "q"]).1, "cycle len=2 entry=2 odd=5\n");
        assert_eq!(call(&["orbit", "16", "--map", "q"]).1, "zero steps=5\n");
        assert_eq!(call(&["orbit", "11", "--map", "s"]).1, "zero steps=12\n");
    }

    #[test]
    fn malformed_numbers_are_usage_errors() {
        assert_eq!(call(&["orbit", "-5"]).0, EXIT_USAGE);
        assert_eq!(call(&["orbit", "12x"]).0, EXIT_USAGE);
        assert_eq!(call(&["probe", "--start", "abc"]).0, EXIT_USAGE);
        assert_eq!(call(&["orbit", "5", "--map", "z"]).0, EXIT_USAGE);
        assert_eq!(call(&["orbit", "5", "--max-steps", "0"]).0, EXIT_USAGE);
        assert_eq!(call(&["scan", "--from", "5", "--to", "2"]).0, EXIT_USAGE);
        assert_eq!(call(&["cycles", "--m-from", "0", "--m-to", "2"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "lemma9"]).0, EXIT_USAGE);
        assert_eq!(call(&["orbit", "7", "--map", "t", "--kseq"]).0, EXIT_USAGE);
    }
}
