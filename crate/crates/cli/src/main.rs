//! Command-line front end: analyze, reduce, export, and check the built-in
//! examples. Results go to stdout as JSON (or DOT); diagnostics go to stderr
//! as one JSON object per line.
//!
//! Exit status: 0 on success, 1 on input or domain errors, 2 when a
//! verification fails.

mod paper;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use stabreduce::gms;
use stabreduce::model::{self, FanModel, ModelDocument};
use stabreduce::{reduce, verify_trace, Error};

const DEGREE_BOUND_VAR: &str = "STABREDUCE_DEGREE_BOUND";

#[derive(Parser)]
#[command(name = "stabreduce", version, about = "Exact stabilizer reduction for toric and monomial quotient stacks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stabilizer dimensions, stability and the maximal stabilizer locus,
    /// or the fixed-point analysis of a polynomial model.
    Analyze { file: PathBuf },
    /// Run the stabilizer reduction and print the verified trace.
    Reduce {
        file: PathBuf,
        /// Initial exceptional divisor as rays with colon-separated
        /// coordinates, e.g. `1:0,0:1`.
        #[arg(long, value_delimiter = ',')]
        divisor: Vec<String>,
    },
    /// Run every built-in example and print a pass/fail table.
    VerifyPaper,
    /// Render the fan of a stack.
    Export {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

enum Failure {
    Domain(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    error: &'a str,
    message: String,
}

fn report(kind: &str, message: String) {
    eprintln!("{}", serde_json::to_string(&Diagnostic { error: kind, message }).expect("diagnostics serialize"));
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{}", text.trim_end());
}

fn print_json<T: Serialize>(value: &T) {
    emit(&serde_json::to_string_pretty(value).expect("outputs serialize"));
}

fn load(path: &Path) -> Result<ModelDocument, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let doc = model::parse_document(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })?;
    Ok(doc)
}

fn degree_bound() -> Result<Option<u32>, Failure> {
    match std::env::var(DEGREE_BOUND_VAR) {
        Err(_) => Ok(None),
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .map(Some)
            .map_err(|_| Failure::Domain(Error::Invalid(format!("{DEGREE_BOUND_VAR}={v:?} is not a nonnegative integer")))),
    }
}

fn parse_ray(text: &str) -> Result<Vec<BigInt>, Failure> {
    text.split(':')
        .map(|x| x.trim().parse::<BigInt>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::Domain(Error::Parse(format!("--divisor ray {text:?} is not colon-separated integers"))))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Analyze { file } => {
            let doc = load(&file)?;
            print_json(&model::analyze(&doc, degree_bound()?)?);
            Ok(())
        }
        Command::Reduce { file, divisor } => {
            let doc = load(&file)?;
            let x = doc.stack()?;
            let mut e0 = doc.divisor();
            for r in &divisor {
                e0.push(parse_ray(r)?);
            }
            let trace = reduce(&x, &e0)?;
            let checks = verify_trace(&trace);
            let bound = degree_bound()?.map(|b| b as usize).or(doc.options().gms_degree_bound).unwrap_or(gms::DEFAULT_DEGREE_BOUND);
            print_json(&model::trace_document(&trace, &checks, bound));
            if checks.passed() {
                Ok(())
            } else {
                let failed: Vec<String> = checks
                    .failures()
                    .map(|c| match c.step {
                        Some(s) => format!("{} (step {s}): {}", c.name, c.detail),
                        None => format!("{}: {}", c.name, c.detail),
                    })
                    .collect();
                Err(Failure::Verification(failed.join("; ")))
            }
        }
        Command::VerifyPaper => {
            let results = paper::run_all();
            let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
            for r in &results {
                match &r.outcome {
                    Ok(()) => emit(&format!("PASS  {}", r.name)),
                    Err(e) => emit(&format!("FAIL  {:width$}  {e}", r.name)),
                }
            }
            let failed = results.iter().filter(|r| r.outcome.is_err()).count();
            emit(&format!("{} of {} checks passed", results.len() - failed, results.len()));
            if failed == 0 {
                Ok(())
            } else {
                Err(Failure::Verification(format!("{failed} built-in checks failed")))
            }
        }
        Command::Export { file, format } => {
            let doc = load(&file)?;
            let x = doc.stack()?;
            match format {
                Format::Dot => emit(&model::fan_to_dot(&x)),
                Format::Json => emit(&ModelDocument::Fan(FanModel::from_union(&x)).to_json()),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            report(e.kind(), e.to_string());
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            report("verification_failed", msg);
            ExitCode::from(2)
        }
    }
}
