//! `gperfect` command-line front end.
//!
//! Data goes to stdout, diagnostics and summaries to stderr. Exit status is
//! 0 on success, 1 on a usage error, and 2 when a scan produced error records.

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::divisor::{classify, norm_perfect_prime_solutions, sigma, PerfectionReport};
use crate::factorization::factor;
use crate::gaussian::GaussianInt;
use crate::search::{
    scan, scan_norm_perfect_primes, scan_sharded, verify_theorem_with, KindFilter, ParityFilter, ScanItem, ScanSummary,
    SearchConfig, SearchRecord,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_ITEM_ERRORS: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "gperfect", version, about = "Sum of divisors and perfect numbers over the Gaussian integers")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the canonical factorization `unit * (p1)^e1 * ...`
    Factor(Subject),
    /// Print sigma(z) and its norm
    Sigma(Subject),
    /// Print the full perfection report
    Check(Subject),
    /// Scan canonical Gaussian integers up to a norm bound for norm-perfect or perfect numbers
    Search(SearchArgs),
    /// Scan canonical primes up to a norm bound for norm-perfect ones
    Primes(BoundArg),
    /// Check the odd-form theorem on every odd norm-perfect number up to a bound
    Verify(BoundArg),
}

#[derive(Debug, Args)]
pub struct Subject {
    /// Gaussian integer such as `2+i`, `-1-2i`, `3i` or `5`
    #[arg(allow_hyphen_values = true, value_parser = parse_subject)]
    pub subject: GaussianInt,
}

#[derive(Debug, Args)]
pub struct BoundArg {
    #[arg(long)]
    pub bound: u64,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub bound: u64,

    #[arg(long, default_value = "all", value_parser = parse_parity)]
    pub parity: ParityFilter,

    #[arg(long, default_value = "norm-perfect", value_parser = parse_kind)]
    pub kind: KindFilter,

    /// Number of contiguous norm slices
    #[arg(long, default_value_t = 1)]
    pub shards: u32,

    /// Run only this slice; without it every slice runs concurrently and the results are merged
    #[arg(long)]
    pub shard: Option<u32>,
}

fn parse_subject(s: &str) -> Result<GaussianInt, String> {
    s.parse::<GaussianInt>().map_err(|e| e.to_string())
}

fn parse_parity(s: &str) -> Result<ParityFilter, String> {
    s.parse()
}

fn parse_kind(s: &str) -> Result<KindFilter, String> {
    s.parse()
}

struct Streams<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    format: OutputFormat,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let mut streams = Streams { out, err, format: cli.format };
    match dispatch(cli.command, &mut streams) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(streams.err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure::Io(e)) => {
            let _ = writeln!(streams.err, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn main_with_stdio() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = io::BufWriter::new(stdout.lock());
    let mut err = stderr.lock();
    let code = run(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    code
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<crate::error::GaussError> for Failure {
    fn from(e: crate::error::GaussError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn dispatch(command: Command, s: &mut Streams<'_>) -> Result<i32, Failure> {
    match command {
        Command::Factor(Subject { subject }) => {
            let f = factor(&subject)?;
            match s.format {
                OutputFormat::Text => writeln!(s.out, "{f}")?,
                OutputFormat::Json => {
                    let value = json!({
                        "subject": subject,
                        "unit": f.unit,
                        "factors": serde_json::to_value(&f).expect("serializable")["factors"],
                        "text": f.to_string(),
                    });
                    writeln!(s.out, "{value}")?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Sigma(Subject { subject }) => {
            let value = sigma(&subject)?;
            let norm = value.norm();
            match s.format {
                OutputFormat::Text => {
                    writeln!(s.out, "{value}")?;
                    writeln!(s.out, "norm {norm}")?;
                }
                OutputFormat::Json => {
                    let n: serde_json::Number = norm.to_string().parse().expect("decimal digits");
                    writeln!(s.out, "{}", json!({ "subject": subject, "sigma": value, "normSigma": n }))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Check(Subject { subject }) => {
            let report = classify(&subject)?;
            match s.format {
                OutputFormat::Text => write_report_text(s.out, &report)?,
                OutputFormat::Json => writeln!(s.out, "{}", serde_json::to_string(&report).expect("serializable"))?,
            }
            Ok(EXIT_OK)
        }
        Command::Search(args) => run_search(args, s),
        Command::Primes(BoundArg { bound }) => {
            let primes = scan_norm_perfect_primes(bound)?;
            for p in &primes {
                let report = classify(p)?;
                match s.format {
                    OutputFormat::Text => {
                        writeln!(s.out, "{p} norm={} sigma={} normSigma={}", p.norm(), report.sigma, report.norm_sigma)?
                    }
                    OutputFormat::Json => writeln!(s.out, "{}", json!({ "prime": p, "report": report }))?,
                }
            }
            let raw = norm_perfect_prime_solutions();
            match s.format {
                OutputFormat::Text => writeln!(
                    s.err,
                    "summary: bound={bound} normPerfectPrimes={} rawSolutions={:?} rawPrimes=[{}]",
                    primes.len(),
                    raw.solutions,
                    raw.primes.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
                )?,
                OutputFormat::Json => writeln!(
                    s.err,
                    "{}",
                    json!({ "summary": { "bound": bound, "normPerfectPrimes": primes.len(), "rawSolutions": raw.solutions, "rawPrimes": raw.primes } })
                )?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify(BoundArg { bound }) => {
            if bound == 0 {
                return Err(Failure::Usage("invalid search configuration: norm bound must be at least 1".into()));
            }
            let mut io_error = None;
            let outcome = verify_theorem_with(bound, |item| {
                if io_error.is_none() {
                    if let Err(e) = write_item(s.out, s.format, item) {
                        io_error = Some(e);
                    }
                }
            })?;
            if let Some(e) = io_error {
                return Err(e.into());
            }
            match s.format {
                OutputFormat::Text => writeln!(
                    s.err,
                    "summary: bound={} checked={} passed={} failed={} kModFour=[1: {}, 3: {}]",
                    outcome.bound,
                    outcome.checked,
                    outcome.passed,
                    outcome.failed,
                    outcome.k_mod_four[1],
                    outcome.k_mod_four[3]
                )?,
                OutputFormat::Json => writeln!(s.err, "{}", json!({ "summary": outcome }))?,
            }
            Ok(if outcome.failed > 0 { EXIT_ITEM_ERRORS } else { EXIT_OK })
        }
    }
}

fn run_search(args: SearchArgs, s: &mut Streams<'_>) -> Result<i32, Failure> {
    let config = SearchConfig::new(args.bound)
        .with_parity(args.parity)
        .with_kinds(args.kind)
        .with_shard(args.shard.unwrap_or(0), args.shards);
    config.validate()?;
    let summary = match args.shard {
        Some(_) => {
            let mut stream = scan(config)?;
            for item in stream.by_ref() {
                write_item(s.out, s.format, &item)?;
            }
            ScanSummary { shards: args.shards, ..stream.summary() }
        }
        None => {
            let mut io_error = None;
            let summary = scan_sharded(&config, args.shards, |item| {
                if io_error.is_none() {
                    if let Err(e) = write_item(s.out, s.format, &item) {
                        io_error = Some(e);
                    }
                }
            })?;
            if let Some(e) = io_error {
                return Err(e.into());
            }
            summary
        }
    };
    match s.format {
        OutputFormat::Text => writeln!(
            s.err,
            "summary: bound={} shards={} scanned={} emitted={} errors={}",
            summary.bound, summary.shards, summary.scanned, summary.emitted, summary.errors
        )?,
        OutputFormat::Json => writeln!(s.err, "{}", json!({ "summary": summary }))?,
    }
    Ok(if summary.errors > 0 { EXIT_ITEM_ERRORS } else { EXIT_OK })
}

fn write_item(out: &mut dyn Write, format: OutputFormat, item: &ScanItem) -> io::Result<()> {
    match format {
        OutputFormat::Json => writeln!(out, "{}", item.to_json_line()),
        OutputFormat::Text => match item {
            ScanItem::Hit(record) => writeln!(out, "{}", record_text(record)),
            ScanItem::Failure(f) => writeln!(out, "{} norm={} error={}", f.subject, f.norm, f.error),
        },
    }
}

fn record_text(record: &SearchRecord) -> String {
    let r = &record.report;
    let perfect = r.perfect_associate.map(|u| u.to_string()).unwrap_or_else(|| "none".into());
    let decomposition = match &record.decomposition {
        Some(d) => format!("{} * ({})^{} * ({})^2", d.unit, d.pi, d.k, d.gamma),
        None => "none".into(),
    };
    format!(
        "{} norm={} kind={} parity={} sigma={} normSigma={} twoNorm={} normPerfect={} perfectUnit={} decomposition={}",
        record.subject,
        record.norm,
        record.kind,
        r.parity,
        r.sigma,
        r.norm_sigma,
        r.two_norm,
        r.is_norm_perfect,
        perfect,
        decomposition
    )
}

fn write_report_text(out: &mut dyn Write, r: &PerfectionReport) -> io::Result<()> {
    writeln!(out, "subject: {}", r.subject)?;
    writeln!(out, "parity: {}", r.parity)?;
    writeln!(out, "sigma: {}", r.sigma)?;
    writeln!(out, "normSigma: {}", r.norm_sigma)?;
    writeln!(out, "twoNorm: {}", r.two_norm)?;
    writeln!(out, "normPerfect: {}", r.is_norm_perfect)?;
    let perfect = r.perfect_associate.map(|u| u.to_string()).unwrap_or_else(|| "none".into());
    writeln!(out, "perfectUnit: {perfect}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("gperfect").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn factor_text() {
        let (code, out, _) = run_capture(&["factor", "5"]);
        assert_eq!(code, 0);
        assert_eq!(out, "-i * (1+2i)^1 * (2+i)^1\n");
    }

    #[test]
    fn negative_literal_is_a_subject() {
        let (code, out, _) = run_capture(&["factor", "-1-2i"]);
        assert_eq!(code, 0);
        assert_eq!(out, "-1 * (1+2i)^1\n");
    }

    #[test]
    fn sigma_of_one() {
        let (code, out, _) = run_capture(&["sigma", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out, "1\nnorm 1\n");
    }

    #[test]
    fn check_json() {
        let (code, out, _) = run_capture(&["check", "2+i", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["normPerfect"], true);
        assert!(v["perfectUnit"].is_null());
    }

    #[test]
    fn usage_errors() {
        let (code, _, err) = run_capture(&["check", "2+x"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("`2+x`"), "{err}");
        let (code, _, err) = run_capture(&["search", "--bound", "10", "--shards", "2", "--shard", "2"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("shard index 2"), "{err}");
        let (code, _, _) = run_capture(&["sigma", "0"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture(&["search"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture(&["search", "--bound", "5", "--parity", "weird"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn help_exits_cleanly() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("search"));
    }
}
