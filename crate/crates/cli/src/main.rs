mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use forkgamma::ModelKind;

#[derive(Debug, Parser)]
#[command(name = "forkgamma", version, about = "Markov models of fork gamma and a latency-network simulator")]
struct Cli {
    /// Directory every artifact is written to.
    #[arg(long, global = true, env = "FORKGAMMA_OUT", default_value = "forkgamma-out")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a model transition matrix and its stationary distribution.
    Model(ModelArgs),
    /// Simulate a gamma series on the latency network.
    Simulate(SimulateArgs),
    /// Bin a gamma series into transition counts and an empirical chain.
    Analyze(AnalyzeArgs),
    /// Score both models against transition counts.
    Compare(CompareArgs),
    /// Simulate, analyze and compare in one run.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Midpoint,
    Kernel,
}

impl From<KindArg> for ModelKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Midpoint => ModelKind::Midpoint,
            KindArg::Kernel => ModelKind::Kernel,
        }
    }
}

#[derive(Debug, Clone, Args)]
struct PartitionArgs {
    /// Strategy partition JSON; defaults to the built-in HM/SM/LSM/EFSM split.
    #[arg(long, value_name = "JSON")]
    partition: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct KernelArgs {
    /// Kernel length scale, strictly positive.
    #[arg(long, default_value_t = 0.25, value_parser = positive)]
    length_scale: f64,
}

#[derive(Debug, Clone, Args)]
struct NetworkArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Rescale the region node counts to this many nodes.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    nodes: Option<u64>,
    /// Probability that a link starts out inactive.
    #[arg(long, default_value_t = 0.1, value_parser = probability)]
    dropout: f64,
    /// Probability that a link is present in each sampled adjacency.
    #[arg(long, default_value_t = 0.9, value_parser = probability)]
    activation: f64,
    #[arg(long, value_name = "JSON")]
    region_config: Option<PathBuf>,
    /// Attacker hashrate label, recorded in the run metadata only.
    #[arg(long)]
    hashrate: Option<String>,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "midpoint")]
    kind: KindArg,
    #[command(flatten)]
    kernel: KernelArgs,
    #[command(flatten)]
    partition: PartitionArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    steps: u64,
    #[command(flatten)]
    network: NetworkArgs,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Series CSV (`time,gamma`) or JSON; simulated when omitted.
    #[arg(long, value_name = "FILE")]
    series: Option<PathBuf>,
    #[arg(long, default_value_t = 5000, value_parser = clap::value_parser!(u64).range(2..))]
    steps: u64,
    #[command(flatten)]
    network: NetworkArgs,
    #[command(flatten)]
    partition: PartitionArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Headerless k x k counts CSV; defaults to the shipped reference counts.
    #[arg(long, value_name = "CSV")]
    counts: Option<PathBuf>,
    #[command(flatten)]
    kernel: KernelArgs,
    #[command(flatten)]
    partition: PartitionArgs,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    #[arg(long, default_value_t = 5000, value_parser = clap::value_parser!(u64).range(2..))]
    steps: u64,
    /// Independent runs at consecutive seeds, counts pooled in seed order.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    replicates: u64,
    #[command(flatten)]
    network: NetworkArgs,
    #[command(flatten)]
    kernel: KernelArgs,
    #[command(flatten)]
    partition: PartitionArgs,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be a finite number > 0, got {v}"))
    }
}

fn probability(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("must lie in [0, 1], got {v}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Model(args) => commands::model(&cli.out, &args),
        Command::Simulate(args) => commands::simulate(&cli.out, &args),
        Command::Analyze(args) => commands::analyze(&cli.out, &args),
        Command::Compare(args) => commands::compare(&cli.out, &args),
        Command::Pipeline(args) => commands::pipeline(&cli.out, &args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
