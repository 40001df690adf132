//! `limitshape`: verification suites, tension tables, limit-shape solves and flows.

mod commands;
mod config;
mod error;
mod output;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "limitshape", version, about = "Six-vertex and dimer limit shapes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification suites and write verify.json.
    Verify(commands::verify::VerifyArgs),
    /// Tabulate a surface tension on a slope grid.
    Tension(commands::tension::TensionArgs),
    /// Solve the variational problem on a cylinder.
    Solve(commands::solve::SolveArgs),
    /// Evolve a profile by the limit-shape flow.
    Flow(commands::flow::FlowArgs),
    /// Characteristic polynomials and matchings of dimer graphs.
    Dimer(commands::dimer::DimerArgs),
    /// Exact six-vertex partition functions.
    Sixv(commands::sixv::SixvArgs),
}

/// Flags shared by every command.
#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Output directory.
    #[arg(long, default_value = ".")]
    #[serde(skip)]
    pub out: PathBuf,
    /// `key=value` file; flags given on the command line win.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Tolerance override.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for randomized test points.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Hex,
    Ff,
    Numeric,
    Quadratic,
}

fn run(args: Vec<String>) -> Result<(), CliError> {
    let args = config::merge(args)?;
    let cmd = Cli::command().mut_subcommands(|c| c.args_override_self(true));
    let matches = match cmd.try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::Config(e.to_string().trim_start_matches("error: ").trim_end().to_string())),
    };
    let cli = Cli::from_arg_matches(&matches).map_err(|e| CliError::Config(e.to_string()))?;
    match cli.command {
        Command::Verify(a) => commands::verify::run(&a),
        Command::Tension(a) => commands::tension::run(&a),
        Command::Solve(a) => commands::solve::run(&a),
        Command::Flow(a) => commands::flow::run(&a),
        Command::Dimer(a) => commands::dimer::run(&a),
        Command::Sixv(a) => commands::sixv::run(&a),
    }
}

fn main() {
    if let Err(e) = run(std::env::args().collect()) {
        eprintln!("limitshape: {e}");
        std::process::exit(e.exit_code());
    }
}
