//! Command-line runner for measurement scenarios.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use condprep::scenario::{
    emit_report, parse_scenario_file, run_scenario, OutputFormat, EXIT_DISAGREEMENT, EXIT_INVALID, EXIT_OK,
    LAMBDA_PRESETS, STATE_PRESETS,
};

#[derive(Parser)]
#[command(name = "condprep", version, about = "Conditional preparation by quantum measurement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and print its report.
    Run {
        /// Scenario JSON file.
        file: PathBuf,
        /// Output format; overrides the scenario's `format`.
        #[arg(long)]
        format: Option<OutputFormat>,
        /// Cross-check every prepared state against the tomographic oracle.
        #[arg(long)]
        verify: bool,
        /// Largest accepted route disagreement (trace distance) for --verify.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List named states and λ patterns.
    Presets,
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Presets => {
            println!("states:");
            for (name, what) in STATE_PRESETS {
                println!("  {name:<16} {what}");
            }
            println!("lambda:");
            for (name, what) in LAMBDA_PRESETS {
                println!("  {name:<16} {what}");
            }
            exit(EXIT_OK)
        }
        Command::Run { file, format, verify, tolerance, out } => {
            let mut config = match parse_scenario_file(&file) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit(e.exit_code());
                }
            };
            config.verify |= verify;
            if let Some(t) = tolerance {
                if !(t.is_finite() && t >= 0.0) {
                    eprintln!("error: --tolerance must be a non-negative number, got {t}");
                    return exit(EXIT_INVALID);
                }
                config.tolerance = t;
            }
            let report = match run_scenario(&config) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit(e.exit_code());
                }
            };
            let text = emit_report(&report, format.unwrap_or(config.format));
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return exit(EXIT_INVALID);
                    }
                }
                None => print!("{text}"),
            }
            if report.disagrees() {
                let max = report.body.verification.as_ref().map_or(0.0, |v| v.max_disagreement);
                eprintln!("verification failed: routes disagree by {max:e}");
                return exit(EXIT_DISAGREEMENT);
            }
            exit(EXIT_OK)
        }
    }
}
