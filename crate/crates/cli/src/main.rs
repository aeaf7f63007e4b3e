mod commands;
mod format;
mod input;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

/// Stepdown multiple-testing constants, procedures and simulations.
#[derive(Debug, Parser)]
#[command(name = "stepdown", version, about)]
struct Cli {
    /// File of `key = value` lines using the flag names; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a critical sequence as CSV `i,alpha_i`.
    Constants(MethodArgs),
    /// Apply a procedure to a CSV of p-values and print a JSON report.
    Apply(ApplyArgs),
    /// Reproduce a table of D(gamma, s) as CSV.
    Table {
        /// 1 or 2.
        which: u8,
    },
    /// Print the data behind a comparison figure as CSV.
    Figure {
        /// 1, 2 or 3.
        which: u8,
    },
    /// Run a seeded Monte Carlo simulation and print a JSON report.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct MethodArgs {
    /// Recipe tag: holm, kfwer, fdp-base, fdp-lr, fdp-improved,
    /// rescaled-custom, eta-i, eta-ii, fdr-sd, fdr-conservative, bh-stepup.
    #[arg(long)]
    pub method: Option<String>,
    /// Number of hypotheses.
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// FDP tolerance as a decimal string, parsed exactly.
    #[arg(long)]
    pub gamma: Option<String>,
    /// k for the k-FWER recipe.
    #[arg(long)]
    pub k: Option<usize>,
    /// One delta per row, for rescaled-custom.
    #[arg(long)]
    pub deltas: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ApplyArgs {
    #[command(flatten)]
    pub method: MethodArgs,
    /// CSV with columns `id,p` or `p`; the header is optional.
    #[arg(long)]
    pub pvalues: Option<PathBuf>,
    /// stepdown (default) or stepup.
    #[arg(long)]
    pub mode: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub method: MethodArgs,
    /// independent, equicorrelated, lemma31, example31, remark31 or example41.
    #[arg(long)]
    pub scenario: Option<String>,
    /// Number of true nulls.
    #[arg(long = "I")]
    pub true_nulls: Option<usize>,
    /// Equicorrelation of the Gaussian scenario.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Mean shift of the false nulls in the Gaussian scenario.
    #[arg(long)]
    pub shift: Option<f64>,
    /// Give the false nulls of the Gaussian scenario their own factor.
    #[arg(long)]
    pub independent_false: bool,
    /// False-null law of the independent scenario: power or point.
    #[arg(long)]
    pub alt: Option<String>,
    /// Exponent of the power law, or location of the point mass.
    #[arg(long)]
    pub alt_param: Option<f64>,
    /// Number of p-values of the lemma31 law.
    #[arg(long)]
    pub t: Option<usize>,
    /// Comma-separated thresholds of the lemma31 law.
    #[arg(long)]
    pub betas: Option<String>,
    /// stepdown (default) or stepup.
    #[arg(long)]
    pub mode: Option<String>,
    /// Default from STEPDOWN_TRIALS, else 10000.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Default from STEPDOWN_WORKERS, else all cores.
    #[arg(long)]
    pub workers: Option<usize>,
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    let config = match &cli.config {
        Some(path) => input::read_config(path)?,
        None => Vec::new(),
    };
    let text = match cli.command {
        Command::Constants(mut a) => {
            commands::merge_method(&mut a, &config)?;
            commands::constants(&a)?
        }
        Command::Apply(mut a) => {
            commands::merge_apply(&mut a, &config)?;
            commands::apply(&a)?
        }
        Command::Table { which } => {
            commands::reject_config(&config, "table")?;
            commands::table(which)?
        }
        Command::Figure { which } => {
            commands::reject_config(&config, "figure")?;
            commands::figure(which)?
        }
        Command::Simulate(mut a) => {
            commands::merge_simulate(&mut a, &config)?;
            commands::simulate(&a)?
        }
    };
    emit(cli.out.as_ref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
