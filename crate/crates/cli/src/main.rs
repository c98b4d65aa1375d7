mod commands;
mod document;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use commands::{Command, Failure, TolFlags};
use report::Report;

/// Truncated matricial Hausdorff moment sequences on [alpha, beta].
///
/// Exit status: 0 pass, 1 mathematical failure, 2 usage or input error.
#[derive(Debug, Parser)]
#[command(name = "hmom", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    tol: TolFlags,
    /// Write the JSON report here. Otherwise it goes to stdout, or to stderr for
    /// `extend` and `random`, whose document goes to stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let args: Vec<String> = std::env::args().collect();
    let mut report = Report::new(cli.command.name(), args);
    let mut outcome = commands::run(&cli.command, &cli.tol, &mut report);
    if let Ok(out) = &outcome {
        if let Some(text) = &out.document {
            match &out.out {
                Some(path) => {
                    if let Err(e) = write_file(path, text) {
                        outcome = Err(e);
                    }
                }
                None => print!("{text}"),
            }
        }
    }
    let code = match &outcome {
        Ok(_) => 0,
        Err(f) => {
            report.passed = false;
            report.error = Some(f.message().to_string());
            eprintln!("hmom {}: {}", report.command.name, f.message());
            f.exit_code()
        }
    };
    report.wall_time_s = start.elapsed().as_secs_f64();
    let text = report.to_json();
    match &cli.report {
        Some(path) => {
            if let Err(e) = write_file(path, &text) {
                eprintln!("hmom: {}", e.message());
                return ExitCode::from(2);
            }
        }
        None if cli.command.writes_document() => {
            let _ = std::io::stderr().write_all(text.as_bytes());
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
