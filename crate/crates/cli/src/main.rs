//! `kahler`: reports on the module of Kähler differentials of a pure
//! extension, plus the self-test and oracle front-ends.
//!
//! Exit codes: 0 success, 1 I/O error, 2 invalid or unsupported input,
//! 3 inconsistent report or failed self-test, 4 precision exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kahler::io::{self, Format};
use kahler::omega::different_report;
use kahler::selftest::{self, Budget, Options, Suite};
use kahler::Error;

#[derive(Parser)]
#[command(name = "kahler", version, about = "Kähler differentials of pure valued-field extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a spec and report on its module of differentials.
    Report {
        spec: PathBuf,
        /// Overrides the format given in the document options.
        #[arg(long, value_enum)]
        format: Option<OutFormat>,
    },
    /// Run the verification suites.
    Selftest {
        #[arg(long, value_enum)]
        only: Option<SuiteArg>,
        /// Base coordinate bound of the enumeration windows.
        #[arg(long, default_value_t = 2)]
        window_bound: i64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Use the full sample sizes.
        #[arg(long)]
        full: bool,
    },
    /// Brute-force oracles.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// `v(g′(η))` of a concrete extension.
    Different {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        format: OutFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Text,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Json => Format::Json,
            OutFormat::Text => Format::Text,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Segments,
    Keypoly,
    Omega,
    Oracle,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Segments => Suite::Segments,
            SuiteArg::Keypoly => Suite::Keypoly,
            SuiteArg::Omega => Suite::Omega,
            SuiteArg::Oracle => Suite::Oracle,
        }
    }
}

const EXIT_IO: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;
const EXIT_PRECISION: u8 = 4;

fn error_code(e: &Error) -> u8 {
    match e {
        Error::PrecisionExhausted(_) | Error::NoStabilizationWitnessed => EXIT_PRECISION,
        _ => EXIT_INPUT,
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(error_code(e))
}

fn read(path: &Path) -> Result<String, ExitCode> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_IO)
    })
}

fn report(path: &Path, format: Option<OutFormat>) -> ExitCode {
    let text = match read(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let doc = match io::parse_document(&text) {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    let rep = match io::run_document(&doc) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let format = format.map(Format::from).or(doc.options.format).unwrap_or_default();
    println!("{}", io::render(&rep, format).trim_end());
    if rep.inconsistent {
        eprintln!("error: the report's criteria disagree");
        return ExitCode::from(EXIT_INCONSISTENT);
    }
    ExitCode::SUCCESS
}

fn run_selftest(only: Option<SuiteArg>, window_bound: i64, seed: u64, full: bool) -> ExitCode {
    let opts = Options {
        window_bound,
        seed,
        budget: if full { Budget::full() } else { Budget::quick() },
    };
    let suites: Vec<Suite> = match only {
        Some(s) => vec![s.into()],
        None => Suite::ALL.to_vec(),
    };
    let (mut total, mut clean) = (0, 0);
    for suite in suites {
        println!("== {suite}");
        for o in selftest::run_suite(suite, &opts) {
            println!("{o}");
            total += 1;
            clean += o.clean() as usize;
        }
    }
    println!("{clean}/{total} checks passed without inconclusive verdicts");
    if clean == total {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INCONSISTENT)
    }
}

fn different(path: &Path, format: OutFormat) -> ExitCode {
    let text = match read(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let d = match io::parse_document(&text).and_then(|doc| different_report(&doc.spec)) {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    match format {
        OutFormat::Json => println!("{}", serde_json::to_string_pretty(&d).expect("reports serialize")),
        OutFormat::Text => {
            println!("n = {}, e = {}, f = {}, monogenic: {}", d.n, d.e, d.f, d.monogenic);
            println!("different: {}", d.different);
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Report { spec, format } => report(&spec, format),
        Command::Selftest { only, window_bound, seed, full } => run_selftest(only, window_bound, seed, full),
        Command::Oracle { which: OracleCommand::Different { spec, format } } => different(&spec, format),
    }
}
