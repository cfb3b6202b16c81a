use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use casimir_cli::commands::{self, SamplingArgs};
use casimir_core::invariants::{DEFAULT_BOUND, DEFAULT_SEED, DEFAULT_TRIALS};
use clap::{Args, Parser, Subcommand};

/// Generalized Casimir invariant counts and contraction checks for Lie algebras.
#[derive(Parser)]
#[command(name = "casimir", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Sampling {
    /// Random evaluation points for the rank estimate.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Coordinates are drawn from [-bound, bound].
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    bound: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Always confirm the rank symbolically (default: only for dimension <= 8).
    #[arg(long)]
    certify: bool,
}

impl From<&Sampling> for SamplingArgs {
    fn from(s: &Sampling) -> Self {
        SamplingArgs {
            trials: s.trials,
            bound: s.bound,
            seed: s.seed,
            certify: s.certify,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse an algebra file and check the Jacobi identity.
    Check { algebra: PathBuf },
    /// Count functionally independent coadjoint invariants.
    Count {
        algebra: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// List a basis of polynomial invariants up to a degree.
    Invariants {
        algebra: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_degree: u32,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Apply a one-parameter family and take the limit e -> 0.
    Contract {
        algebra: PathBuf,
        family: PathBuf,
        /// Write the limit algebra here.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long)]
        check_semicontinuity: bool,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Decide whether the second algebra can possibly be a contraction of the first.
    RuleOut {
        algebra0: PathBuf,
        algebra1: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Write a built-in algebra (abelian N, heisenberg N, frobenius_model N, sl2, so3).
    Catalog {
        name: String,
        params: Vec<usize>,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::EXIT_USAGE } else { commands::EXIT_OK });
        }
    };
    let result = match &cli.command {
        Command::Check { algebra } => commands::check(algebra),
        Command::Count { algebra, sampling } => commands::count(algebra, &sampling.into()),
        Command::Invariants {
            algebra,
            max_degree,
            sampling,
        } => commands::invariants(algebra, *max_degree, &sampling.into()),
        Command::Contract {
            algebra,
            family,
            emit,
            check_semicontinuity,
            sampling,
        } => commands::contract(algebra, family, emit.as_deref(), *check_semicontinuity, &sampling.into()),
        Command::RuleOut {
            algebra0,
            algebra1,
            sampling,
        } => commands::rule_out(algebra0, algebra1, &sampling.into()),
        Command::Catalog { name, params, emit } => commands::catalog_entry(name, params, emit.as_deref()),
    };
    match result {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.render().as_bytes());
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
