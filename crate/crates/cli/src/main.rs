//! `cql`: runs bubble checks, deficit fits, scenario minimizations and Lorentz
//! norm computations, writing CSV reports to `--out`.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 invalid configuration.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cql_core::lorentz::LorentzIndex;

use commands::{parse_index, BubbleVerify, Deficit};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "cql", version, about = "Critical Sobolev quotient experiments")]
struct Cli {
    /// Directory for CSV reports.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Overrides the seed of every scenario.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Relative tolerance of the radial quadrature.
    #[arg(long, global = true, default_value_t = 1e-10)]
    quad_tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate energy and mass of uncut bubbles and check they agree.
    BubbleVerify {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,0.1,0.01")]
        eps: Vec<f64>,
        /// Largest accepted relative spread of the tabulated values.
        #[arg(long, default_value_t = 1e-9)]
        check_tol: f64,
    },
    /// Fit the energy deficit of cut bubbles with a constant potential.
    Deficit {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.025,0.0125,0.00625")]
        eps: Vec<f64>,
    },
    /// Minimize the quotient for one or more scenario files.
    Minimize {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
    },
    /// Lorentz norms of a grid file.
    Lorentz {
        grid: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        /// Second indices; `inf` for the weak space.
        #[arg(long, value_delimiter = ',', value_parser = parse_index, required = true)]
        d: Vec<LorentzIndex>,
    },
    /// Bounded/small-tail splitting of a potential stored as a grid file.
    Split {
        grid: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, value_parser = parse_index)]
        d: LorentzIndex,
        #[arg(long)]
        tol: f64,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build()?;
    let out = cli.out;
    pool.install(|| match cli.command {
        Command::BubbleVerify { n, eps, check_tol } => commands::bubble_verify(
            &BubbleVerify {
                n,
                eps,
                quad_tol: cli.quad_tol,
                check_tol,
            },
            &out,
        ),
        Command::Deficit { n, lambda, mu, eps } => commands::deficit(
            &Deficit {
                n,
                lambda,
                mu,
                eps,
                quad_tol: cli.quad_tol,
            },
            &out,
        ),
        Command::Minimize { configs } => commands::minimize(&configs, cli.seed, &out),
        Command::Lorentz { grid, p, d } => commands::lorentz(&grid, &p, &d, &out),
        Command::Split { grid, p, d, tol } => commands::split(&grid, p, d, tol, &out),
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
