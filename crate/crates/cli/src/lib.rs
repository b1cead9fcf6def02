//! Library side of the `divgap` binary: argument parsing, dispatch and
//! output formatting. [`run`] is what `main` calls; [`run_with`] takes
//! explicit streams for tests.

pub mod config;
pub mod dsl;
mod emit;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use divgap::explore::{chen_scan, scan_difference_with, ScanOptions};
use divgap::witness::verify_certificate_with;
use divgap::{
    classify, make_witness, sarkozy_witness, verify_counterexample, Error, Instance, IntPolynomial, SetSpec,
    WitnessCertificate, WitnessRequest,
};
use num_bigint::BigInt;

pub use config::{CliConfig, FileConfig, OutputFormat, CONFIG_ENV};
pub use dsl::{parse_setspec, InvalidSetSpec};

use emit::{Document, Emitter};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFICATION_FAILED: i32 = 1;
    pub const INVALID_INPUT: i32 = 2;
    pub const SEARCH_CAP: i32 = 3;
}

#[derive(Debug, Parser)]
#[command(name = "divgap", version, about = "Divisor-count gaps between linear forms")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    output: Option<OutputFormat>,
    /// TOML file with default settings (overrides $DIVGAP_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Candidates tried by a prime search before giving up.
    #[arg(long, global = true)]
    max_prime_steps: Option<u64>,
    /// Largest modulus, in bits, a prime search accepts.
    #[arg(long, global = true)]
    max_bits: Option<u64>,
    /// Miller-Rabin rounds above the deterministic range (at least 16).
    #[arg(long, global = true)]
    rounds: Option<u32>,
    /// Series sampling step.
    #[arg(long, global = true)]
    stride: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Tuple {
    #[arg(allow_negative_numbers = true)]
    b: BigInt,
    #[arg(allow_negative_numbers = true)]
    c: BigInt,
    #[arg(allow_negative_numbers = true)]
    e: BigInt,
    #[arg(allow_negative_numbers = true)]
    f: BigInt,
}

impl Tuple {
    fn instance(&self) -> Instance {
        Instance::new(self.b.clone(), self.c.clone(), self.e.clone(), self.f.clone())
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether the gap is unbounded for every infinite set.
    Classify(Tuple),
    /// Build and verify a certificate that the gap reaches TARGET.
    Witness {
        #[command(flatten)]
        tuple: Tuple,
        #[arg(long, value_parser = parse_setspec)]
        set: SetSpec,
        #[arg(long)]
        target: u64,
    },
    /// Show the set keeping the gap bounded and check it numerically.
    Refute {
        #[command(flatten)]
        tuple: Tuple,
        /// Largest n scanned.
        #[arg(long)]
        scan: u64,
    },
    /// Scan |d(A, F(n)) - d(A, G(n))| for polynomials given constant term first.
    Scan {
        #[arg(long = "f", value_delimiter = ',', allow_hyphen_values = true, required = true)]
        f: Vec<BigInt>,
        #[arg(long = "g", value_delimiter = ',', allow_hyphen_values = true, required = true)]
        g: Vec<BigInt>,
        #[arg(long, value_parser = parse_setspec)]
        set: SetSpec,
        #[arg(long)]
        n_max: u64,
        /// Include sampled points in JSON and text output.
        #[arg(long)]
        series: bool,
    },
    /// Witness with gap at least K - 2 built from the first K elements.
    Sarkozy {
        #[arg(long, value_parser = parse_setspec)]
        set: SetSpec,
        #[arg(long)]
        k: usize,
    },
    /// Re-check a certificate read from FILE (`-` for stdin). Accepts a bare
    /// certificate or a `witness`/`sarkozy` document.
    Verify {
        #[arg(long, value_parser = parse_setspec)]
        set: SetSpec,
        file: PathBuf,
    },
    /// Scan min over pairs of |d(A, n+i) - d(A, n+j)|, i, j in {1, 2, 3}.
    Chen {
        #[arg(long, value_parser = parse_setspec)]
        set: SetSpec,
        #[arg(long)]
        n_max: u64,
        #[arg(long)]
        series: bool,
    },
}

/// A failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: exit::INVALID_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SearchCapExceeded { .. } | Error::ModulusTooLarge { .. } => exit::SEARCH_CAP,
            _ => exit::INVALID_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::INVALID_INPUT } else { exit::OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let config = match resolve_config(&cli) {
        Ok(c) => c,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            return exit::INVALID_INPUT;
        }
    };
    let mut emitter = Emitter::new(config.output, out);
    let result = dispatch(cli.command, &config, &mut emitter);
    let code = match result {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            emitter.error(failure.code, &failure.message);
            failure.code
        }
    };
    if let Err(e) = emitter.finish() {
        let _ = writeln!(err, "error: writing output: {e}");
    }
    code
}

fn resolve_config(cli: &Cli) -> Result<CliConfig, String> {
    let file = match config::config_path(cli.config.clone()) {
        Some(path) => FileConfig::load(&path)?,
        None => FileConfig::default(),
    };
    let flags = FileConfig {
        output: cli.output,
        stride: cli.stride,
        max_prime_steps: cli.max_prime_steps,
        max_bits: cli.max_bits,
        probabilistic_rounds: cli.rounds,
        ..Default::default()
    };
    file.merge(flags).resolve()
}

fn dispatch(command: Command, cfg: &CliConfig, emitter: &mut Emitter<'_>) -> Result<i32, Failure> {
    match command {
        Command::Classify(tuple) => {
            let instance = tuple.instance();
            let verdict = classify(&instance);
            emitter.emit(Document::Classification { instance, verdict });
            Ok(exit::OK)
        }
        Command::Witness { tuple, set, target } => {
            if target == 0 {
                return Err(Failure::input("target must be >= 1"));
            }
            let req = WitnessRequest {
                caps: cfg.caps,
                primality: cfg.primality,
                ..WitnessRequest::new(tuple.instance(), set.clone(), target)
            };
            let certificate = make_witness(&req)?;
            let report = verify_certificate_with(&certificate, &set, &cfg.primality);
            let code = if report.is_ok() { exit::OK } else { exit::VERIFICATION_FAILED };
            emitter.emit(Document::Witness {
                command: "witness",
                set,
                faults: report.faults.iter().map(ToString::to_string).collect(),
                certificate,
            });
            Ok(code)
        }
        Command::Refute { tuple, scan } => {
            let instance = tuple.instance();
            let verdict = classify(&instance);
            let Some(family) = verdict.family() else {
                let label = verdict.case_label().expect("unbounded verdicts carry a case");
                return Err(Failure::input(format!(
                    "{instance} is unbounded for every infinite set (case {label}); nothing to refute"
                )));
            };
            let report = verify_counterexample(&instance, family, scan)?;
            let code = if report.within_bound { exit::OK } else { exit::VERIFICATION_FAILED };
            emitter.emit(Document::Refutation(report));
            Ok(code)
        }
        Command::Scan {
            f,
            g,
            set,
            n_max,
            series,
        } => {
            let (f, g) = (IntPolynomial { coeffs: f }, IntPolynomial { coeffs: g });
            let opts = scan_options(cfg, series);
            let report = scan_difference_with(&f, &g, &set, n_max, &opts)?;
            emitter.emit(Document::Scan { f, g, set, report });
            Ok(exit::OK)
        }
        Command::Sarkozy { set, k } => {
            let certificate = sarkozy_witness(&set, k, &cfg.caps, &cfg.primality)?;
            let report = verify_certificate_with(&certificate, &set, &cfg.primality);
            let code = if report.is_ok() { exit::OK } else { exit::VERIFICATION_FAILED };
            emitter.emit(Document::Witness {
                command: "sarkozy",
                set,
                faults: report.faults.iter().map(ToString::to_string).collect(),
                certificate,
            });
            Ok(code)
        }
        Command::Verify { set, file } => {
            let certificate = read_certificate(&file)?;
            let report = verify_certificate_with(&certificate, &set, &cfg.primality);
            let code = if report.is_ok() { exit::OK } else { exit::VERIFICATION_FAILED };
            emitter.emit(Document::Witness {
                command: "verify",
                set,
                faults: report.faults.iter().map(ToString::to_string).collect(),
                certificate,
            });
            Ok(code)
        }
        Command::Chen { set, n_max, series } => {
            let opts = scan_options(cfg, series);
            let report = chen_scan(&set, n_max, &opts)?;
            emitter.emit(Document::Chen { set, report });
            Ok(exit::OK)
        }
    }
}

fn read_certificate(path: &Path) -> Result<WitnessCertificate, Failure> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let inner = match value.get("certificate") {
        Some(c) => c.clone(),
        None => value,
    };
    serde_json::from_value(inner).map_err(|e| Failure::input(format!("{}: not a certificate: {e}", path.display())))
}

/// CSV output is the series itself, so it is always sampled.
fn scan_options(cfg: &CliConfig, series: bool) -> ScanOptions {
    let wanted = series || cfg.output == OutputFormat::Csv;
    ScanOptions {
        series_stride: wanted.then_some(cfg.stride),
        ..ScanOptions::default()
    }
}
