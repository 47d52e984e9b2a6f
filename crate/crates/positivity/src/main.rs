use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use positivity::commands::{self, exit, CliError, ProveFlags, Report};
use positivity::core::prover::DEFAULT_BUDGET;

/// Exact positivity proofs for P-finite sequences.
///
/// Exit codes: 0 positive or accepted, 1 not positive or rejected,
/// 2 inconclusive, 3 hypothesis failure, 64 malformed input, 66 unreadable
/// file, 70 internal error.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// Print a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a certificate.
    Prove {
        problem: PathBuf,
        /// Number of terms to unroll before giving up.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Prove strict positivity.
        #[arg(long)]
        strict: bool,
        /// Write the certificate here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a certificate.
    Verify {
        problem: PathBuf,
        certificate: PathBuf,
        #[arg(long)]
        strict: bool,
    },
    /// Print the terms up to index n.
    Eval { problem: PathBuf, n: u64 },
    /// Print the limit matrix, its spectrum and the hypothesis checks.
    Inspect { problem: PathBuf },
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Prove { problem, budget, strict, output } => {
            let (_, p) = commands::load_problem(problem)?;
            let report = commands::prove(&p, &ProveFlags { budget: *budget, strict: *strict })?;
            if let (Some(path), Some(cert)) = (output, &report.certificate) {
                fs::write(path, cert.emit() + "\n").map_err(|e| CliError {
                    code: exit::SOFTWARE,
                    message: format!("{}: {e}", path.display()),
                })?;
            }
            Ok(report)
        }
        Command::Verify { problem, certificate, strict } => {
            let (_, p) = commands::load_problem(problem)?;
            let cert = commands::load_certificate(certificate)?;
            commands::verify_certificate(&p, &cert, *strict)
        }
        Command::Eval { problem, n } => commands::eval(&commands::load_problem(problem)?.1, *n),
        Command::Inspect { problem } => commands::inspect(&commands::load_problem(problem)?.1),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(exit::USAGE);
        }
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable"));
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(report.code)
        }
        Err(e) => {
            if cli.json {
                println!("{}", serde_json::json!({ "error": e.message, "exit_code": e.code }));
            } else {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.code)
        }
    }
}
