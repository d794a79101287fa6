//! Command-line front end: generate traces, evaluate B(n) in closed form,
//! run the verification suites, probe the B_k generalizations, benchmark the
//! closed form against the naive engine, and diff OEIS b-files.
//!
//! Exit codes: 0 success, 1 verification failure or mismatch, 2 sequence
//! death, 3 usage error.

mod bfile;
mod numparse;

use std::fmt;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use metafib::engine::{Preset, RecurrenceSpec, RecurrenceTerm, TraceStatus};
use metafib::{fastb, probe, verify, Spec, Term, Trace};

const EXIT_OK: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_DEATH: u8 = 2;
const EXIT_USAGE: u8 = 3;

/// The largest n the closed-form evaluator accepts.
const FASTB_MAX: i64 = 1 << 62;

#[derive(Parser)]
#[command(
    name = "metafib",
    about = "Nested meta-Fibonacci recurrences: traces, closed-form B(n), verification suites, b-file diffs",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a sequence trace as b-file lines (exit 2 if the sequence dies).
    Gen(GenArgs),
    /// Evaluate B(n) with the O(log^2 n) closed-form evaluator.
    Fastb(FastbArgs),
    /// Run a verification suite (exit 1 on any violation).
    Verify(VerifyArgs),
    /// Diff a b-file against a computed sequence (exit 1 on first mismatch).
    Compare(CompareArgs),
    /// Time the closed-form evaluator, optionally against the naive engine.
    Bench(BenchArgs),
}

/// Which recurrence to run: a named preset or a custom term list.
#[derive(Args, Debug, Clone)]
struct SpecArgs {
    /// Preset: q, v, w, conolly, b, bk (with --k/--n-init), bprime,
    /// qrs:R,S or qrst:R,S,T.
    #[arg(long)]
    preset: Option<String>,
    /// k for the bk preset.
    #[arg(long)]
    k: Option<u32>,
    /// Identity initial-condition length N for the bk preset.
    #[arg(long = "n-init")]
    n_init: Option<u32>,
    /// Inner offsets o_j of a custom recurrence, comma separated.
    #[arg(long, value_delimiter = ',')]
    offsets: Option<Vec<u32>>,
    /// Outer shifts e_j (default all zero), comma separated.
    #[arg(long, value_delimiter = ',')]
    shifts: Option<Vec<u32>>,
    /// Initial condition of a custom recurrence, comma separated.
    #[arg(long, value_delimiter = ',')]
    init: Option<Vec<i64>>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Number of terms to compute (scientific notation accepted).
    #[arg(long)]
    count: String,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Bfile)]
    format: Format,
}

#[derive(Args)]
struct FastbArgs {
    /// Points: integers, comma lists, or inclusive ranges a..b (e.g. 7 1..20 1e12).
    #[arg(required = true)]
    points: Vec<String>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Range bound: largest value (structure/lemmas), largest n (density),
    /// or trace horizon (only-slow).
    #[arg(long)]
    limit: Option<String>,
    /// k for the jump suite (default: sweep 4..=8), or k_max for only-slow.
    #[arg(long)]
    k: Option<u32>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    /// Repeat classification vs the witness predicate, plus monotonicity.
    Structure,
    /// Witness uniqueness and the R(m, i) identities.
    Lemmas,
    /// B(n)/n against 2/3 at decade points, exact arithmetic.
    Density,
    /// Forced step value, plateau pattern and difference-2 jump of B_k.
    Jump,
    /// Slowness scan of every B_k with identity initial conditions.
    OnlySlow,
}

#[derive(Args)]
struct CompareArgs {
    /// b-file to check ("n value" lines, '#' comments ignored).
    path: PathBuf,
    #[command(flatten)]
    spec: SpecArgs,
    /// Compare against the closed-form evaluator instead of a trace.
    #[arg(long)]
    fastb: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Points to time (integers, scientific notation accepted).
    #[arg(required = true)]
    points: Vec<String>,
    /// Also time naive generation of this many terms and spot-check agreement.
    #[arg(long)]
    naive: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Tab separated `n<TAB>value` lines.
    Bfile,
    /// Comma separated "n,value" lines.
    Csv,
}

/// Error that should exit with the usage code rather than the failure code.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

/// Invalid parameters and malformed specs are usage errors; everything else
/// from the library is a runtime failure.
fn lib_err(e: metafib::Error) -> anyhow::Error {
    match e {
        metafib::Error::Overflow { .. } | metafib::Error::TraceDied { .. } => anyhow!("{e}"),
        _ => usage(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let benign = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if benign {
                ExitCode::from(EXIT_OK)
            } else {
                ExitCode::from(EXIT_USAGE)
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::from(EXIT_VIOLATION)
            }
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Gen(args) => cmd_gen(args),
        Cmd::Fastb(args) => cmd_fastb(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Compare(args) => cmd_compare(args),
        Cmd::Bench(args) => cmd_bench(args),
    }
}

impl SpecArgs {
    fn build(&self) -> Result<Spec> {
        match (&self.preset, &self.offsets) {
            (Some(_), Some(_)) => Err(usage("give either --preset or --offsets, not both")),
            (None, None) => Err(usage(
                "a sequence is required: --preset or --offsets/--init",
            )),
            (Some(name), None) => {
                let preset = if name.eq_ignore_ascii_case("bk") {
                    let k = self.k.ok_or_else(|| usage("preset bk needs --k"))?;
                    let init_len = self
                        .n_init
                        .ok_or_else(|| usage("preset bk needs --n-init"))?;
                    Preset::Bk { k, init_len }
                } else {
                    if self.k.is_some() || self.n_init.is_some() {
                        return Err(usage("--k/--n-init only apply to the bk preset"));
                    }
                    name.parse::<Preset>().map_err(lib_err)?
                };
                preset.spec().map_err(lib_err)
            }
            (None, Some(offsets)) => {
                let init = self
                    .init
                    .clone()
                    .ok_or_else(|| usage("custom recurrences need --init"))?;
                let shifts = match &self.shifts {
                    Some(s) => s.clone(),
                    None => vec![0; offsets.len()],
                };
                if shifts.len() != offsets.len() {
                    return Err(usage(format!(
                        "{} offsets but {} shifts",
                        offsets.len(),
                        shifts.len()
                    )));
                }
                let terms = offsets
                    .iter()
                    .zip(&shifts)
                    .map(|(&o, &e)| RecurrenceTerm::new(e, o))
                    .collect::<metafib::Result<Vec<_>>>()
                    .map_err(lib_err)?;
                RecurrenceSpec::new(terms, init).map_err(lib_err)
            }
        }
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn write_pair(w: &mut dyn Write, n: i64, value: i64, format: Format) -> Result<()> {
    match format {
        Format::Bfile => writeln!(w, "{n}\t{value}")?,
        Format::Csv => writeln!(w, "{n},{value}")?,
    }
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<u8> {
    let count = numparse::parse_integer(&args.count).map_err(|e| usage(e.to_string()))?;
    if count < 1 {
        return Err(usage("--count must be at least 1"));
    }
    let count = usize::try_from(count).map_err(|_| usage("--count is out of range"))?;
    let spec = args.spec.build()?;
    let trace = spec.generate(count).map_err(lib_err)?;

    let mut out = open_output(&args.output)?;
    for (n, value) in trace.iter_indexed() {
        write_pair(out.as_mut(), n as i64, value, args.format)?;
    }
    if let TraceStatus::Died {
        at_index,
        offending_argument,
    } = trace.status()
    {
        writeln!(
            out,
            "# died at index {at_index} (argument {offending_argument})"
        )?;
        out.flush()?;
        return Ok(EXIT_DEATH);
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn check_fastb_point(n: i64) -> Result<i64> {
    if n < 1 {
        return Err(usage(format!("n must be positive, got {n}")));
    }
    if n > FASTB_MAX {
        return Err(usage(format!("n = {n} exceeds the supported maximum 2^62")));
    }
    Ok(n)
}

fn cmd_fastb(args: FastbArgs) -> Result<u8> {
    let points = numparse::parse_points(&args.points).map_err(|e| usage(e.to_string()))?;
    let mut out = open_output(&args.output)?;
    for n in points {
        let n = check_fastb_point(n)?;
        writeln!(out, "{n}\t{}", fastb::fast_b(n))?;
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn parse_limit(limit: &Option<String>, default: i64) -> Result<i64> {
    match limit {
        None => Ok(default),
        Some(s) => numparse::parse_integer(s).map_err(|e| usage(e.to_string())),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let passed = match args.suite {
        Suite::Structure => {
            let limit = parse_limit(&args.limit, 100_000)?;
            let report = verify::verify_structure::<Term>(limit).map_err(lib_err)?;
            println!("{report}");
            report.passed()
        }
        Suite::Lemmas => {
            let limit = parse_limit(&args.limit, 100_000)?;
            let uniq = verify::verify_lemma_uniqueness::<Term>(limit).map_err(lib_err)?;
            println!("{uniq}");
            let idents = verify::verify_r_identities::<Term>(limit).map_err(lib_err)?;
            println!("{idents}");
            uniq.passed() && idents.passed()
        }
        Suite::Density => {
            let limit = parse_limit(&args.limit, 1_000_000)?;
            if limit < 1 {
                return Err(usage("--limit must be at least 1"));
            }
            let mut points = Vec::new();
            let mut n: i64 = 1_000;
            while n <= limit {
                points.push(n);
                n = n.saturating_mul(10);
            }
            if points.is_empty() {
                points.push(limit);
            }
            let profile = verify::density_profile(&points);
            for p in &profile {
                let (num, den) = p.deviation();
                println!(
                    "n = {:>13}: B(n) = {:>13}, |B(n)/n - 2/3| = {num}/{den} = {:.3e}",
                    p.n,
                    p.b,
                    p.deviation_f64()
                );
            }
            let trend = verify::deviations_nonincreasing(&profile);
            println!(
                "deviation trend nonincreasing: {}",
                if trend { "yes" } else { "NO" }
            );
            let mut ok = trend;
            if limit >= 1_000_000 {
                let bound = profile.last().unwrap().deviation_below(1, 1_000);
                println!(
                    "final deviation below 1/1000: {}",
                    if bound { "yes" } else { "NO" }
                );
                ok &= bound;
            }
            ok
        }
        Suite::Jump => {
            let ks: Vec<u32> = match args.k {
                Some(k) => vec![k],
                None => (4..=8).collect(),
            };
            let mut ok = true;
            for k in ks {
                let step = probe::verify_step_value::<Term>(k).map_err(lib_err)?;
                println!("{step}");
                let plateau = probe::verify_plateau::<Term>(k).map_err(lib_err)?;
                println!("{plateau}");
                let jump = probe::verify_jump::<Term>(k).map_err(lib_err)?;
                println!("{jump}");
                ok &= step.passed() && plateau.passed() && jump.passed();
            }
            ok
        }
        Suite::OnlySlow => {
            let horizon = parse_limit(&args.limit, 10_000)?;
            let horizon = usize::try_from(horizon).map_err(|_| usage("--limit is out of range"))?;
            let k_max = args.k.unwrap_or(6);
            let report = probe::scan_only_slow::<Term>(k_max, horizon).map_err(lib_err)?;
            print!("{report}");
            println!("slow k values: {:?} (expected: only 3)", report.slow_ks());
            report.passed() && report.slow_ks() == vec![3]
        }
    };
    Ok(if passed { EXIT_OK } else { EXIT_VIOLATION })
}

/// Largest trace the compare command will generate.
const COMPARE_MAX_TERMS: i64 = 10_000_000;

fn cmd_compare(args: CompareArgs) -> Result<u8> {
    let file = File::open(&args.path)
        .with_context(|| format!("opening {}", args.path.display()))
        .map_err(|e| usage(format!("{e:#}")))?;
    let records = bfile::parse(BufReader::new(file)).map_err(|e| usage(format!("{e:#}")))?;

    let spec_given = args.spec.preset.is_some() || args.spec.offsets.is_some();
    if args.fastb == spec_given {
        return Err(usage(
            "give exactly one reference: --fastb, or a spec (--preset / --offsets)",
        ));
    }

    if args.fastb {
        for rec in &records {
            let n = check_fastb_point(rec.n)?;
            let computed = fastb::fast_b(n);
            if computed != rec.value {
                println!(
                    "mismatch at n = {n}: file has {}, computed {computed}",
                    rec.value
                );
                return Ok(EXIT_VIOLATION);
            }
        }
        println!(
            "OK: {} records match the closed-form evaluator",
            records.len()
        );
        return Ok(EXIT_OK);
    }

    let max_n = records.last().unwrap().n;
    if max_n > COMPARE_MAX_TERMS {
        return Err(usage(format!(
            "file indexes up to {max_n}; naive comparison is capped at {COMPARE_MAX_TERMS} terms (use --fastb for the B-sequence)"
        )));
    }
    let spec = args.spec.build()?;
    let trace = spec.generate(max_n as usize).map_err(lib_err)?;
    for rec in &records {
        match trace.get(rec.n as usize) {
            Some(computed) if computed == rec.value => {}
            Some(computed) => {
                println!(
                    "mismatch at n = {}: file has {}, computed {computed}",
                    rec.n, rec.value
                );
                return Ok(EXIT_VIOLATION);
            }
            None => {
                if let TraceStatus::Died {
                    at_index,
                    offending_argument,
                } = trace.status()
                {
                    println!(
                        "sequence died at index {at_index} (argument {offending_argument}) before n = {}",
                        rec.n
                    );
                    return Ok(EXIT_DEATH);
                }
                unreachable!("an alive trace covers every requested index");
            }
        }
    }
    println!("OK: {} records match the generated trace", records.len());
    Ok(EXIT_OK)
}

fn cmd_bench(args: BenchArgs) -> Result<u8> {
    let points = numparse::parse_points(&args.points).map_err(|e| usage(e.to_string()))?;
    let mut timings = Vec::new();
    for n in &points {
        let n = check_fastb_point(*n)?;
        // Best of three; these run in microseconds and jitter dominates.
        let mut best: Option<std::time::Duration> = None;
        let mut value = 0;
        for _ in 0..3 {
            let start = Instant::now();
            value = fastb::fast_b(n);
            let dt = start.elapsed();
            best = Some(best.map_or(dt, |b| b.min(dt)));
        }
        println!("{n}\t{value}");
        timings.push((n, best.unwrap()));
    }
    for (n, dt) in &timings {
        println!("# fast_b({n}): {:.1} us", dt.as_secs_f64() * 1e6);
    }

    if let Some(naive) = &args.naive {
        let count = numparse::parse_integer(naive).map_err(|e| usage(e.to_string()))?;
        if count < 1 {
            return Err(usage("--naive must be at least 1"));
        }
        let count = usize::try_from(count).map_err(|_| usage("--naive is out of range"))?;
        let start = Instant::now();
        let trace: Trace = Preset::B
            .spec()
            .map_err(lib_err)?
            .generate(count)
            .map_err(lib_err)?;
        let dt = start.elapsed();
        println!(
            "# naive B trace of {count} terms: {:.1} ms",
            dt.as_secs_f64() * 1e3
        );
        let naive_value = trace.get(count).unwrap();
        let fast_value = fastb::fast_b(count as i64);
        if naive_value != fast_value {
            println!("# MISMATCH at n = {count}: naive {naive_value}, fast {fast_value}");
            return Ok(EXIT_VIOLATION);
        }
        println!("# agreement at n = {count}: naive = fast = {naive_value}");
    }
    Ok(EXIT_OK)
}
