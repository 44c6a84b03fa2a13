//! `flowmon` command-line driver.

mod bench;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flowmon::solvers::Algorithm;
use flowmon::Weight;

use crate::commands::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "flowmon",
    version,
    about = "Flow edge-monitor placement and inference"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate an instance in the graph text format.
    Gen(GenArgs),
    /// Strip bridges, merge components and contract 2-cut groups.
    Reduce {
        input: PathBuf,
        /// Sidecar map file; defaults to `<input>.map`.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Place monitors through the reduce/solve/lift pipeline.
    Solve {
        /// greedy1, greedy2, greedy:<sigma> or exact.
        #[arg(long, default_value = "greedy2")]
        algo: Algorithm,
        #[arg(short, long)]
        k: usize,
        /// Append per-step greedy records.
        #[arg(long)]
        trace: bool,
        input: PathBuf,
    },
    /// Infer flows from monitor readings.
    Infer {
        /// Comma-separated monitor edge ids.
        #[arg(short, long, allow_hyphen_values = true)]
        monitors: String,
        /// File of `r <edge_id> <value>` lines.
        #[arg(short, long)]
        readings: PathBuf,
        input: PathBuf,
    },
    /// Print the kernel graph of a monitor set.
    Kernel {
        #[arg(short, long)]
        monitors: String,
        input: PathBuf,
    },
    /// Exhaustive optimum on the unreduced graph.
    Exact {
        #[arg(short, long)]
        k: usize,
        input: PathBuf,
    },
    /// Brute-force checks of the clique reduction and the composition lemma.
    Hardness(HardnessArgs),
    /// Time the pipeline across a size ladder.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Greedy1Tight,
    Greedy2Tight,
    Fig1,
    Cycle,
    Ladder,
    Random,
}

#[derive(Debug, Args)]
struct GenArgs {
    family: Family,
    #[arg(short, long)]
    k: Option<usize>,
    #[arg(long, default_value = "0.01")]
    epsilon: Weight,
    #[arg(short, long)]
    n: Option<usize>,
    #[arg(short, long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    min_degree: usize,
    /// Forbid loops and parallel edges.
    #[arg(long)]
    simple: bool,
    #[arg(long, default_value_t = 1)]
    max_weight: u64,
    /// Write the graph here instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// For fig1: write the four readings to this file.
    #[arg(long)]
    readings_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct HardnessMode {
    /// Check the clique reduction equivalence.
    #[arg(long)]
    verify_star: bool,
    /// Check the composition lemma for all 1 <= s <= n.
    #[arg(long)]
    lemma1: bool,
}

#[derive(Debug, Args)]
struct HardnessArgs {
    #[command(flatten)]
    mode: HardnessMode,
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    /// Vertex counts up to this are enumerated exhaustively; larger ones are sampled.
    #[arg(long, default_value_t = 6)]
    exhaustive_up_to: usize,
    /// Random graphs per sampled vertex count.
    #[arg(long, default_value_t = 150)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Edge counts of the ladder.
    #[arg(long, value_delimiter = ',', default_value = "20,40,60,80")]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    sigmas: Vec<usize>,
    #[arg(short, long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => commands::gen(&a),
        Command::Reduce { input, map } => commands::reduce(&input, map.as_deref()),
        Command::Solve {
            algo,
            k,
            trace,
            input,
        } => commands::solve(&input, k, algo, trace),
        Command::Infer {
            monitors,
            readings,
            input,
        } => commands::infer(&input, &monitors, &readings),
        Command::Kernel { monitors, input } => commands::kernel(&input, &monitors),
        Command::Exact { k, input } => commands::exact(&input, k),
        Command::Hardness(a) => commands::hardness(&a),
        Command::Bench(a) => bench::run(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Inconsistent) => ExitCode::from(4),
        Err(f) => {
            eprintln!("flowmon: {f}");
            ExitCode::from(f.code())
        }
    }
}
