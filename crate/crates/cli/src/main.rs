//! `mixid` command-line interface.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 unreadable or
//! unparsable input, 3 invalid graph or graph/data mismatch, 4 optimizer
//! divergence.

mod commands;
mod failure;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use failure::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "mixid",
    version,
    about = "Identifiability, simulation and estimation for linear SEMs on mixed graphs"
)]
struct Cli {
    /// Print readable text instead of JSON.
    #[arg(long, global = true)]
    human: bool,

    /// Worker threads for parallel commands.
    #[arg(long, global = true, env = "MIXID_THREADS", value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide which direct effects are generically identifiable.
    Check(CheckArgs),
    /// Cross-check the flow criterion against path enumeration and numeric rank.
    Verify(VerifyArgs),
    /// Proportion of identifiable random graphs across edge densities.
    Survey(SurveyArgs),
    /// Draw parameters and data from a graph.
    Simulate(SimulateArgs),
    /// Estimate the coefficient matrix from data.
    Estimate(EstimateArgs),
    /// Show the flow network behind one v-rank.
    Flow(FlowArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Graph JSON file.
    graph: PathBuf,
    /// Check a single edge `u,v`.
    #[arg(long, value_name = "U,V")]
    edge: Option<String>,
    /// Parents of the edge's head whose coefficients are already known.
    #[arg(long, value_name = "LIST", requires = "edge", value_delimiter = ',')]
    known: Vec<String>,
    /// Use the cyclic-graph criteria even if the graph is acyclic.
    #[arg(long)]
    cyclic: bool,
    /// Also write the JSON result here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=6))]
    max_vertices: u8,
    /// Graphs sampled per size above the exhaustive range.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Debug, Args)]
pub struct SurveyArgs {
    #[arg(long, default_value_t = 25)]
    p: usize,
    /// Grid `start:stop:step`, inclusive.
    #[arg(long, default_value = "0.1:0.9:0.1")]
    densities: String,
    #[arg(long, default_value_t = 500)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    Laplace,
    Uniform,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    graph: PathBuf,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Dist::Laplace)]
    dist: Dist,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    params_out: PathBuf,
    #[arg(long)]
    data_out: PathBuf,
    /// Also write the sampled errors as CSV.
    #[arg(long)]
    errors_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Poly2,
    Rbf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    /// Least squares on parents.
    Reg,
    /// The true parameters (needs --true-params).
    Tv,
    Random,
    /// Parameters from --init-params.
    Custom,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    graph: PathBuf,
    /// Data CSV with one column per vertex.
    data: PathBuf,
    #[arg(long, value_enum, default_value_t = KernelArg::Poly2)]
    kernel: KernelArg,
    #[arg(long, value_enum, default_value_t = InitArg::Reg)]
    init: InitArg,
    #[arg(long)]
    init_params: Option<PathBuf>,
    /// Extra random starts; the best final objective wins.
    #[arg(long, default_value_t = 0)]
    random_starts: usize,
    #[arg(long)]
    true_params: Option<PathBuf>,
    /// Seed for random starts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    graph: PathBuf,
    #[arg(long)]
    node: String,
    /// Parents of the node forming the target set.
    #[arg(long, value_delimiter = ',')]
    set: Vec<String>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .map_err(|e| Failure::new(2, format!("thread pool: {e}")))?;
    }
    let human = cli.human;
    match cli.command {
        Command::Check(a) => commands::check::run(&a, human),
        Command::Verify(a) => commands::verify::run(&a, human),
        Command::Survey(a) => commands::survey::run(&a, human),
        Command::Simulate(a) => commands::simulate::run(&a, human),
        Command::Estimate(a) => commands::estimate::run(&a, human),
        Command::Flow(a) => commands::flow::run(&a, human),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
