use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod plot;
mod settings;

use commands::Figure;
use settings::Flags;

/// Start-up flow of a fractional Maxwell fluid in a circular pipe.
#[derive(Debug, Parser)]
#[command(name = "fracpipe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Positive zeros of J0 as `m,k_m` rows.
    Roots {
        /// Number of roots; falls back to --modes.
        count: Option<usize>,
    },
    /// Velocity field on a uniform radial grid at dt, 2dt, ..., t-max.
    Velocity,
    /// Shear stress field in units of the pressure-gradient scale.
    Stress,
    /// Center velocity u(0, t).
    CenterSeries,
    /// Curves of one of the reproduced figures.
    Figure {
        #[arg(value_enum)]
        which: Figure,
    },
    /// Long-time class of the fluid.
    Classify {
        /// ALPHA BETA LAMBDA, overriding the flags.
        #[arg(num_args = 0..=3, allow_negative_numbers = true)]
        params: Vec<f64>,
    },
    /// Check the spring-path criterion on a network catalog.
    Conjecture {
        /// Catalog file of `name = expression` lines; the built-in one when absent.
        catalog: Option<PathBuf>,
    },
    /// Compare the finite-difference oracle with the series solution.
    OracleCompare {
        /// ALPHA BETA LAMBDA, overriding the flags.
        #[arg(num_args = 0..=3, allow_negative_numbers = true)]
        params: Vec<f64>,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let f = &cli.flags;
    match cli.command {
        Command::Roots { count } => commands::roots(f, count),
        Command::Velocity => commands::field(f, false),
        Command::Stress => commands::field(f, true),
        Command::CenterSeries => commands::center_series(f),
        Command::Figure { which } => commands::figure(f, which),
        Command::Classify { params } => commands::classify(f, &params),
        Command::Conjecture { catalog } => commands::conjecture(f, catalog.as_deref()),
        Command::OracleCompare { params } => commands::oracle_compare(f, &params),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
