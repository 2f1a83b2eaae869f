//! Command-line front end: validate algebras, enumerate ribbon graphs, solve
//! for the graph sum and check it against the master equation.
//!
//! Exit codes: 0 pass, 1 semantic failure, 2 usage, input or window error.

mod pipeline;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncbv::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ncbv",
    version,
    about = "Ribbon-graph solutions of the noncommutative BV equation"
)]
struct Cli {
    /// Worker threads (defaults to NCBV_JOBS, then the number of cores).
    #[arg(long, global = true, env = "NCBV_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of an algebra file.
    Validate { path: PathBuf },
    /// List or count isomorphism classes of ribbon graphs.
    Enumerate(EnumerateArgs),
    /// Compute the graph sum S.
    Solve(SolveArgs),
    /// Evaluate the master equation residual of S on a window.
    Check(CheckArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    /// Smallest Euler characteristic.
    #[arg(long, allow_hyphen_values = true)]
    chi: i64,
    /// Number of legs.
    #[arg(long)]
    legs: usize,
    /// Only trivalent vertices (the default).
    #[arg(long, conflicts_with = "min3")]
    trivalent: bool,
    /// Vertices of any valency at least three.
    #[arg(long)]
    min3: bool,
    /// Keep graphs with legless boundary components.
    #[arg(long)]
    allow_legless: bool,
    /// Leg-labeled classes instead of unlabeled ones.
    #[arg(long)]
    labeled: bool,
    /// Print only the number of classes.
    #[arg(long)]
    count_only: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    Full,
    InvertibleOnly,
}

#[derive(Args)]
struct SolveArgs {
    algebra: PathBuf,
    /// Smallest Euler characteristic of the graphs summed.
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    min_euler: i64,
    /// Largest number of legs.
    #[arg(long, default_value_t = 6)]
    max_legs: usize,
    /// Trees only (same as --min-euler 1).
    #[arg(long)]
    trees_only: bool,
    /// How to build H when the file does not give one.
    #[arg(long, value_enum, default_value_t = Scope::Full)]
    scope: Scope,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Output file (stdout when absent).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    solution: PathBuf,
    algebra: PathBuf,
    /// Largest letter count and hbar power checked.
    #[arg(long, num_args = 2, value_names = ["LETTERS", "HBAR"], default_values_t = [4, 2])]
    window: Vec<u32>,
    /// How to build H when neither the file nor the solution manifest says.
    #[arg(long, value_enum)]
    scope: Option<Scope>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Refused(_) | Error::Homotopy(_) | Error::Singular { .. } | Error::Contraction(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Validate { path } => pipeline::validate(&path),
        Command::Enumerate(a) => pipeline::enumerate(&pipeline::EnumerateConfig {
            chi_min: a.chi,
            legs: a.legs,
            min3: a.min3 && !a.trivalent,
            require_legs: !a.allow_legless,
            labeled: a.labeled,
            count_only: a.count_only,
        }),
        Command::Solve(a) => pipeline::solve(&pipeline::SolveConfig {
            algebra: a.algebra,
            chi_min: if a.trees_only { 1 } else { a.min_euler },
            max_legs: a.max_legs,
            scope: a.scope,
            format: a.format,
            output: a.output,
        }),
        Command::Check(a) => pipeline::check(&pipeline::CheckConfig {
            solution: a.solution,
            algebra: a.algebra,
            max_letters: a.window[0] as usize,
            max_hbar: a.window[1],
            scope: a.scope,
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
