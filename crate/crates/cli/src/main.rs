//! `betasat`: WalkSAT variants with learned restarts, a random k-SAT
//! generator, a DPLL oracle and the benchmark harness.
//!
//! Exit codes follow SAT-competition conventions: 10 satisfiable,
//! 20 unsatisfiable (oracle only), 0 unknown or success, 1 error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use betasat_core::restart::Algorithm;
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "betasat",
    version,
    about = "Stochastic local search SAT solving with Beta-learned restarts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a WalkSAT variant on a DIMACS file.
    Solve(SolveArgs),
    /// Generate a uniform random k-SAT instance.
    Gen(GenArgs),
    /// Decide a DIMACS file with the complete DPLL solver.
    Oracle(OracleArgs),
    /// Run a benchmark suite and print the comparison tables.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub path: PathBuf,
    /// walksat, beta, kbest or all
    #[arg(long, default_value = "beta", value_parser = parse_algo)]
    pub algo: Algorithm,
    /// Random-walk probability.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 100)]
    pub max_tries: u32,
    #[arg(long, default_value_t = 10_000)]
    pub max_flips: u64,
    /// Belief increment per failed try (beta).
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    /// History size (kbest).
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub vars: usize,
    #[arg(long)]
    pub clauses: usize,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    pub path: PathBuf,
    /// Maximum number of branching decisions.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Suite configuration (key = value file).
    #[arg(long)]
    pub config: PathBuf,
    /// Record CSV to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads; overrides `jobs` in the config.
    #[arg(long)]
    pub jobs: Option<usize>,
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse()
        .map_err(|e: betasat_core::restart::UnknownAlgorithm| e.to_string())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Solve(args) => commands::solve(&args),
        Command::Gen(args) => commands::gen(&args),
        Command::Oracle(args) => commands::oracle(&args),
        Command::Bench(args) => commands::bench(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
