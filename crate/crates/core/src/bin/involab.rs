use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use involab::scenario::{RunOptions, Scenario};
use involab::suite::theorem_suite;

#[derive(Parser)]
#[command(name = "involab", version, about = "Alternator subalgebras of orthogonal involutions in characteristic 2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tasks of a scenario file and print a JSON report.
    Run {
        scenario: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Candidates for the randomized isotropy search.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the descent and decomposability properties on random instances.
    Suite {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a scenario with the brute-force cross-check forced on.
    Oracle { scenario: PathBuf },
}

fn emit(json: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, format!("{json}\n")).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn run_scenario(path: &PathBuf, options: RunOptions, out: Option<&PathBuf>) -> ExitCode {
    let report = match Scenario::from_path(path).and_then(|s| s.run(options)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&report.to_json(), out) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    for failure in &report.failures {
        eprintln!("check failed: {failure}");
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Run { scenario, seed, budget, out } => {
            run_scenario(&scenario, RunOptions { seed, budget, force_oracle: false }, out.as_ref())
        }
        Command::Oracle { scenario } => {
            run_scenario(&scenario, RunOptions { force_oracle: true, ..Default::default() }, None)
        }
        Command::Suite { seed, count, out } => {
            let report = match theorem_suite(seed, count) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            if let Err(e) = emit(&report.to_json(), out.as_ref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
