//! `fwmsim`: configuration-driven runner for the four-wave-mixing and
//! interferometry simulations.

mod commands;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fwm_core::config::ExperimentConfig;
use fwm_core::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "fwmsim", version, about = "Truncated-Wigner four-wave mixing and sub-shot-noise interferometry")]
struct Cli {
    /// Experiment configuration (TOML); built-in defaults when omitted.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,

    /// Override the configuration's RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Upper bound on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Prepare an ensemble at `t_fwm` and write a checkpoint.
    Prepare {
        /// Checkpoint path; defaults to `<output.dir>/<model>.ckpt`.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Populations and pair variances over the mixing-time grid.
    ScanFwm {
        /// Models to overplot; defaults to the configured one.
        #[arg(long, value_delimiter = ',')]
        models: Vec<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Balance and sweep the interferometer on a prepared checkpoint.
    Interfere {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Sensitivity against atom-number changes for the configured schemes.
    Robustness {
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Quick built-in checks against closed-form and exact results.
    Selftest,
    /// Print the effective configuration.
    ShowConfig,
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.rng_seed = s;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::config("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::config(format!("thread pool: {e}")))?;
    }
    let cfg = load_config(&cli)?;
    match cli.command {
        Command::Prepare { output } => commands::prepare(&cfg, output),
        Command::ScanFwm { models, output } => commands::scan_fwm(&cfg, &models, output),
        Command::Interfere { checkpoint, output } => commands::interfere(&cfg, &checkpoint, output),
        Command::Robustness { output } => commands::robustness(&cfg, output),
        Command::Selftest => selftest::run(&cfg),
        Command::ShowConfig => {
            print!("{}", cfg.to_toml()?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
