mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Symmetric separable states, joint numerical ranges and mean-field
/// ground energies.
#[derive(Debug, Parser)]
#[command(name = "symsep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// JSON input file.
    #[arg(long)]
    pub input: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Overrides the command's main tolerance (see each subcommand).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the symmetric product range of two observables, trace its
    /// support function and detect flat boundary segments. --tol sets the
    /// mean-field tolerance.
    Range {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 64)]
        directions: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 1e-6)]
        gap_tol: f64,
        #[arg(long, default_value_t = 0.2)]
        length_tol: f64,
    },
    /// Mean-field ground energy per k-subset, optionally swept over one
    /// coefficient. --tol sets the mean-field tolerance.
    Ground {
        #[command(flatten)]
        common: Common,
        /// `TERM=START:STOP:STEPS` (inclusive, linear) or `TERM=V1,V2,...`;
        /// TERM is a term name or a 0-based index.
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
    },
    /// Exact symmetric-subspace energies for N = k..=N_max against the
    /// mean-field limit. --tol sets the mean-field tolerance.
    Definetti {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
    },
    /// Rewrite a symmetric separable decomposition as a mixture of symmetric
    /// pure product states. --tol sets the symmetry tolerance (default 1e-8).
    Decompose {
        #[command(flatten)]
        common: Common,
    },
    /// Entanglement witnesses for a density matrix. --tol sets the margin a
    /// witness must be negative by (default 1e-10).
    Witness {
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Range { common, directions, samples, restarts, gap_tol, length_tol } => {
            commands::range(&common, directions, samples, restarts, gap_tol, length_tol)
        }
        Command::Ground { common, sweep, restarts } => commands::ground(&common, sweep.as_deref(), restarts),
        Command::Definetti { common, n_max, restarts } => commands::definetti(&common, n_max, restarts),
        Command::Decompose { common } => commands::decompose(&common),
        Command::Witness { common } => commands::witness(&common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("symsep: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
