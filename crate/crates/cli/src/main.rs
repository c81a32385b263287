use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use recurlab_cli::{run, Command, Overrides};

#[derive(Parser)]
#[command(
    name = "recurlab",
    version,
    about = "Recurrence experiments for weighted shifts and dissipative composition operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the configured tower or weights
    Classify(Common),
    /// Randomized semiconjugacy and lift checks
    ConjugacyCheck(Common),
    /// Orbit distances, return sets and density evidence
    Orbit(Common),
    /// Classify a family of random towers and cross-check the invariants
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// JSON experiment config
    #[arg(long)]
    config: PathBuf,
    /// Output directory for the report and CSV files
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Overrides the config seed
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the criteria horizon (the orbit length for `orbit`)
    #[arg(long)]
    horizon: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (command, common) = match cli.command {
        Cmd::Classify(c) => (Command::Classify, c),
        Cmd::ConjugacyCheck(c) => (Command::ConjugacyCheck, c),
        Cmd::Orbit(c) => (Command::Orbit, c),
        Cmd::Sweep(c) => (Command::Sweep, c),
    };
    let overrides = Overrides {
        seed: common.seed,
        horizon: common.horizon,
    };
    match run(command, &common.config, &overrides, &common.out) {
        Ok(outcome) => {
            println!("{}", outcome.report_path.display());
            for v in &outcome.violations {
                eprintln!("invariant violated: {v}");
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("recurlab {}: {e}", command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
