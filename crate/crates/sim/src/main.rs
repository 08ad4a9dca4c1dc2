use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qutrit_sim::{parse_config, run_scenario, ScenarioConfig, EXIT_CONFIG, EXIT_OK, EXIT_RUN};

#[derive(Parser)]
#[command(
    name = "qutrit-sim",
    version,
    about = "Qutrit transfer and protocol scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its output file
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Parse and validate a scenario without running it
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load(path: &Path) -> Result<ScenarioConfig, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (path, run) = match &cli.command {
        Command::Run { config } => (config, true),
        Command::Validate { config } => (config, false),
    };
    let config = match load(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if !run {
        println!(
            "{}: ok ({} -> {})",
            path.display(),
            config.scenario,
            config.output_path.display()
        );
        return ExitCode::from(EXIT_OK);
    }
    match run_scenario(&config) {
        Ok(out) => {
            println!("{}: wrote {}", config.scenario, out.display());
            ExitCode::from(EXIT_OK)
        }
        Err(e) => {
            eprintln!("error: {}: {e}", config.scenario);
            ExitCode::from(EXIT_RUN)
        }
    }
}
