//! `ridgeshrink`: simulation grids, dataset fits and real-data MSE tables.
//!
//! Exit codes: 0 success, 1 usage, 2 data error, 3 numerical failure.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ridgeshrink",
    version,
    about = "Ridge-parameter estimators: simulation and real-data evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Markdown,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a Monte Carlo grid and write AMSE tables.
    Simulate(SimulateArgs),
    /// Fit a dataset with one or more ridge-parameter estimators.
    Fit(FitArgs),
    /// Estimated theoretical MSE table for a bundled dataset.
    Realdata(RealdataArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// The full 36-cell grid (rho x n x p x sigma2).
    #[arg(long, conflicts_with_all = ["config", "rho", "n", "p", "sigma2"])]
    pub paper_grid: bool,
    /// CSV grid file with columns rho,n,p,sigma2[,replications][,seed].
    #[arg(long, conflicts_with_all = ["rho", "n", "p", "sigma2"])]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// Replications per cell.
    #[arg(long, default_value_t = ridge_shrink::simulation::DEFAULT_REPLICATIONS)]
    pub reps: usize,
    /// Base seed; cell i uses a seed derived from (seed, i).
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV path (header row, first column the response) or a bundled id.
    pub data: String,
    /// Estimator id, repeatable (case-insensitive).
    #[arg(long = "estimator", conflicts_with = "all")]
    pub estimators: Vec<String>,
    /// Every registry estimator (the default when no --estimator is given).
    #[arg(long)]
    pub all: bool,
    /// Fit the data as given (no centering or scaling, n - p residual df).
    #[arg(long)]
    pub raw: bool,
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RealdataArgs {
    /// gruber or cement
    pub dataset: String,
    /// Center the response without scaling it to unit length.
    #[arg(long)]
    pub centered_y: bool,
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate(&args),
        Command::Fit(args) => commands::fit(&args),
        Command::Realdata(args) => commands::realdata(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
