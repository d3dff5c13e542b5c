use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{error::ErrorKind, Parser, Subcommand};
use shl_cli::batch::{self, BatchItem};
use shl_cli::checks::{run_suite, SUITES};
use shl_cli::json::to_pretty;
use shl_cli::{analyze, render_text, CliError, Options};
use shl_core::ModuleTag;

/// Hodge filtration and generating levels of isolated (semi)quasihomogeneous
/// hypersurface singularities.
#[derive(Debug, Parser)]
#[command(name = "shl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze one polynomial, given inline or as a file containing it.
    Analyze {
        /// Polynomial such as "x1^3+x2^3+x3^3", or a path to a file holding one.
        input: String,
        /// Weights w1,w2,... as rationals; inferred when omitted.
        #[arg(long)]
        weights: Option<String>,
        /// Highest filtration index computed.
        #[arg(long, value_name = "P")]
        max_level: Option<i64>,
        /// Highest slice degree computed, as a rational.
        #[arg(long, value_name = "D")]
        max_degree: Option<String>,
        /// Emit the JSON report.
        #[arg(long)]
        json: bool,
        /// Restrict filtration and certificates to one module.
        #[arg(long, value_parser = parse_module)]
        module: Option<ModuleTag>,
        /// Certify this generating level only.
        #[arg(long, value_name = "R")]
        certify_level: Option<i64>,
    },
    /// Analyze every line "expr" or "expr ; w1,w2,..." of a file.
    Batch {
        file: PathBuf,
        /// Emit one JSON object per line.
        #[arg(long)]
        json: bool,
    },
    /// Run a built-in property suite.
    Check {
        /// One of poincare, pairing, symmetry, filtration, paper-examples.
        suite: String,
    },
}

fn parse_module(s: &str) -> Result<ModuleTag, String> {
    s.parse()
}

fn read_input(input: &str) -> Result<String, CliError> {
    let path = Path::new(input);
    if path.is_file() {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {input}: {e}")))
    } else {
        Ok(input.to_string())
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn run_analyze(input: &str, opts: &Options, json: bool) -> ExitCode {
    let text = match read_input(input) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    match analyze(&text, opts) {
        Ok(report) => {
            if json {
                println!("{}", to_pretty(&report));
            } else {
                print!("{}", render_text(&report));
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}

fn run_batch(file: &Path, json: bool) -> ExitCode {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            return fail(&CliError::Validation(format!(
                "cannot read {}: {e}",
                file.display()
            )))
        }
    };
    let lines = batch::parse_lines(&text);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = batch::worker_limit() {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => return fail(&CliError::Validation(format!("cannot start workers: {e}"))),
    };
    let items = pool.install(|| batch::run(&lines, &Options::default()));
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for item in &items {
        let res = match (item, json) {
            (BatchItem::Report(r), true) => {
                writeln!(out, "{}", serde_json::to_string(r).expect("serializable"))
            }
            (BatchItem::Error(e), true) => {
                writeln!(out, "{}", serde_json::to_string(e).expect("serializable"))
            }
            (BatchItem::Report(r), false) => writeln!(out, "{}", render_text(r)),
            (BatchItem::Error(e), false) => writeln!(
                out,
                "line {}: error (exit code {}): {}\n",
                e.line, e.exit_code, e.error
            ),
        };
        if res.is_err() {
            return ExitCode::from(1);
        }
    }
    ExitCode::SUCCESS
}

fn run_check(suite: &str) -> ExitCode {
    let Some(results) = run_suite(suite) else {
        eprintln!(
            "error: unknown suite '{suite}' (expected one of {})",
            SUITES.join(", ")
        );
        return ExitCode::from(1);
    };
    let mut failed = 0;
    for r in &results {
        match &r.outcome {
            Ok(()) => println!("PASS {}", r.name),
            Err(e) => {
                failed += 1;
                println!("FAIL {}: {e}", r.name);
            }
        }
    }
    println!(
        "{suite}: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match cli.command {
        Command::Analyze {
            input,
            weights,
            max_level,
            max_degree,
            json,
            module,
            certify_level,
        } => {
            let opts = Options {
                weights,
                max_level,
                max_degree,
                module,
                certify_level,
            };
            run_analyze(&input, &opts, json)
        }
        Command::Batch { file, json } => run_batch(&file, json),
        Command::Check { suite } => run_check(&suite),
    }
}
