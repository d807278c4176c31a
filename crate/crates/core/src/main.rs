use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use quasistable::runner::{self, ExperimentConfig, Experiment, RunOptions, EXIT_ERROR};

#[derive(Parser)]
#[command(name = "quasistable", version, about = "Complex-mass Poincaré semigroup experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write CSV, summary and manifest.
    Run {
        config: PathBuf,
        /// Output directory (default: $QUASISTABLE_OUT or ./out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Cap on worker threads.
        #[arg(long)]
        threads: Option<usize>,
        /// Single worker, ordered compensated reductions.
        #[arg(long)]
        deterministic: bool,
    },
    /// Check a config without running it; prints every problem found.
    Validate { config: PathBuf },
    /// Randomized kinematics and evolution property suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &PathBuf) -> anyhow::Result<std::result::Result<ExperimentConfig, Vec<runner::ConfigError>>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(runner::validate(&text))
}

fn report_errors(errors: &[runner::ConfigError]) {
    for e in errors {
        eprintln!("error: {e}");
    }
}

fn execute(cfg: &ExperimentConfig, options: &RunOptions) -> anyhow::Result<i32> {
    let outcome = runner::run(cfg, options)?;
    let dir = options.resolve_out_dir();
    println!(
        "{} [{}]: {} -> {}",
        outcome.manifest.experiment,
        outcome.manifest.name,
        outcome.manifest.verdict,
        dir.display()
    );
    Ok(outcome.exit_code)
}

fn main_inner() -> anyhow::Result<i32> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out, threads, deterministic } => match load(&config)? {
            Ok(cfg) => execute(&cfg, &RunOptions { out_dir: out, threads, deterministic }),
            Err(errors) => {
                report_errors(&errors);
                Ok(EXIT_ERROR)
            }
        },
        Command::Validate { config } => match load(&config)? {
            Ok(cfg) => {
                println!("ok: {} ({})", cfg.name(), cfg.experiment.as_str());
                Ok(0)
            }
            Err(errors) => {
                report_errors(&errors);
                Ok(EXIT_ERROR)
            }
        },
        Command::Selftest { seed, out } => {
            let cfg: ExperimentConfig = serde_json::from_value(serde_json::json!({
                "experiment": Experiment::Selftest.as_str(),
                "complex_mass": { "mass": 1.0, "width": 0.2 },
                "seed": seed,
            }))?;
            execute(&cfg, &RunOptions { out_dir: out, threads: None, deterministic: true })
        }
    }
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
