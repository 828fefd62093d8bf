mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, config or domain: exit status 1.
    Input(String),
    /// Numerical failure: exit status 2.
    Numerical(String),
}

impl From<tricomi::Error> for CliError {
    fn from(e: tricomi::Error) -> Self {
        use tricomi::Error::*;
        match e {
            Numerical(_) | IterationDiverged { .. } | Bracket(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numerical(m) => m,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "tricomi", version, about = "Numerical experiments for the Tricomi equation")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// TOML config for the subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for random data and ensembles.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, global = true, default_value = "tricomi-out")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical and conformal exponents, regime and global-existence indices.
    Exponents {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Special-function identity suite.
    SpecfunTest,
    /// Linear evolution of configured data.
    Propagate,
    /// Nonlinear simulation with a blowup verdict.
    Simulate,
    /// Comparison ODE runs and the c0 bisection.
    Riccati,
    /// Blowup verdicts over a range of exponents.
    BlowupScan {
        #[arg(long)]
        n: usize,
        /// `start:stop:count` or a comma-separated list.
        #[arg(long)]
        p_grid: String,
    },
    /// Empirical Strichartz ratios over a random ensemble.
    Strichartz,
    /// Knapp scaling experiment.
    Knapp {
        #[arg(long)]
        q: f64,
        #[arg(long)]
        r: f64,
        /// Comma-separated geometric sequence of δ values.
        #[arg(long)]
        deltas: String,
        /// Use `r dr` in the radial norm.
        #[arg(long)]
        weighted: bool,
    },
    /// Radial Radon transform of a profile.
    Radon {
        #[arg(long)]
        n: usize,
        /// `ball` or `gaussian`.
        #[arg(long, default_value = "ball")]
        profile: String,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Number of ρ samples on `[0, radius]`.
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
