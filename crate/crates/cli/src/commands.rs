use std::fs::{self, File};
use std::path::Path;

use anyhow::{bail, Context, Result};
use forkgamma::fixtures::reference_counts;
use forkgamma::network::{moving_average, simulate_gamma_series, unit_schedule};
use forkgamma::{
    build_model, count_transitions, default_partition, empirical_transition_matrix, is_irreducible,
    occupancy_fractions, stationary_distribution, GammaSeries, KernelConfig, LikelihoodReport, ModelKind, RegionConfig,
    SimulationConfig, StateDistribution, StrategyPartition, TransitionCounts, TransitionMatrix,
};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::output::{distribution_csv, render_distribution, OutDir};
use crate::{AnalyzeArgs, CompareArgs, ModelArgs, NetworkArgs, PartitionArgs, PipelineArgs, SimulateArgs};

fn load_partition(args: &PartitionArgs) -> Result<StrategyPartition> {
    match &args.partition {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            StrategyPartition::from_json(&text).with_context(|| format!("parsing partition {}", path.display()))
        }
        None => Ok(default_partition()),
    }
}

fn simulation_config(args: &NetworkArgs) -> Result<SimulationConfig> {
    let mut regions = match &args.region_config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            RegionConfig::from_json(&text).with_context(|| format!("parsing region config {}", path.display()))?
        }
        None => RegionConfig::default(),
    };
    if let Some(n) = args.nodes {
        regions = regions.with_total_nodes(n as usize)?;
    }
    Ok(SimulationConfig {
        regions,
        dropout: args.dropout,
        activation: args.activation,
    })
}

fn read_series(path: &Path) -> Result<GammaSeries> {
    let series = if path.extension().is_some_and(|e| e == "json") {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        GammaSeries::from_json(&text)
    } else {
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        GammaSeries::read_csv(file)
    };
    series.with_context(|| format!("parsing series {}", path.display()))
}

fn read_counts(path: &Path, partition: StrategyPartition) -> Result<TransitionCounts> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    TransitionCounts::read_csv(file, partition).with_context(|| format!("parsing counts {}", path.display()))
}

#[derive(Serialize)]
struct RunMetadata<'a> {
    command: &'a str,
    seeds: Vec<u64>,
    steps: u64,
    hashrate: Option<&'a str>,
    /// sha256 of the steps and simulation config, independent of the seed.
    config_hash: String,
    config: &'a SimulationConfig,
}

fn config_hash(steps: u64, config: &SimulationConfig) -> Result<String> {
    let bytes = serde_json::to_vec(&(steps, config))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn write_series(out: &OutDir, series: &GammaSeries, stem: &str) -> Result<()> {
    out.write(&format!("{stem}.csv"), &series.to_csv_string()?)?;
    out.write(&format!("{stem}.json"), &series.to_json()?)?;
    let avg = moving_average(series)?;
    out.write(&format!("{stem}_moving_average.csv"), &avg.to_csv_string()?)?;
    let mut plot = String::from("time,gamma,moving_average\n");
    for ((t, g), a) in series.times().iter().zip(series.values()).zip(avg.values()) {
        plot.push_str(&format!("{t},{g},{a}\n"));
    }
    out.write(&format!("{stem}_plot.csv"), &plot)?;
    Ok(())
}

/// Runs one simulation per seed, in parallel, returned in seed order.
fn simulate_seeds(seeds: &[u64], steps: u64, config: &SimulationConfig) -> Result<Vec<GammaSeries>> {
    let schedule = unit_schedule(steps as usize);
    std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .iter()
            .map(|&seed| {
                let schedule = &schedule;
                scope.spawn(move || simulate_gamma_series(schedule, seed, config))
            })
            .collect();
        handles
            .into_iter()
            .zip(seeds)
            .map(|(h, seed)| {
                h.join()
                    .expect("simulation thread panicked")
                    .with_context(|| format!("simulating seed {seed}"))
            })
            .collect()
    })
}

fn run_simulations(out: &OutDir, command: &str, steps: u64, seeds: &[u64], net: &NetworkArgs) -> Result<Vec<GammaSeries>> {
    let config = simulation_config(net)?;
    let runs = simulate_seeds(seeds, steps, &config)?;
    for (series, seed) in runs.iter().zip(seeds) {
        let stem = if seeds.len() == 1 { "series".to_string() } else { format!("series_seed{seed}") };
        write_series(out, series, &stem)?;
    }
    let meta = RunMetadata {
        command,
        seeds: seeds.to_vec(),
        steps,
        hashrate: net.hashrate.as_deref(),
        config_hash: config_hash(steps, &config)?,
        config: &config,
    };
    out.write_json("run.json", &meta)?;
    Ok(runs)
}

fn write_model(out: &OutDir, name: &str, m: &TransitionMatrix, pi: &StateDistribution) -> Result<()> {
    out.write_json(&format!("{name}_matrix.json"), m)?;
    out.write(&format!("{name}_matrix.csv"), &m.to_csv())?;
    out.write_json(&format!("{name}_stationary.json"), pi)?;
    out.write(&format!("{name}_stationary.csv"), &distribution_csv(m.labels(), pi.weights()))?;
    Ok(())
}

fn solve_model(kind: ModelKind, partition: &StrategyPartition, length_scale: f64) -> Result<(TransitionMatrix, StateDistribution)> {
    let m = build_model(kind, partition, KernelConfig::new(length_scale)?)?;
    let pi = stationary_distribution(&m).with_context(|| format!("stationary distribution of the {} model", kind.name()))?;
    Ok((m, pi))
}

pub fn model(out: &Path, args: &ModelArgs) -> Result<()> {
    let out = OutDir::new(out);
    let partition = load_partition(&args.partition)?;
    let kind: ModelKind = args.kind.into();
    let (m, pi) = solve_model(kind, &partition, args.kernel.length_scale)?;
    println!("{} model\n{}", kind.name(), m.render(2));
    println!("stationary: {}", render_distribution(m.labels(), pi.weights(), 2));
    write_model(&out, kind.name(), &m, &pi)
}

pub fn simulate(out: &Path, args: &SimulateArgs) -> Result<()> {
    let out = OutDir::new(out);
    let runs = run_simulations(&out, "simulate", args.steps, &[args.network.seed], &args.network)?;
    let values = runs[0].values();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    println!("{} samples, mean gamma {mean:.4}", values.len());
    Ok(())
}

struct Analysis {
    counts: TransitionCounts,
    stationary: Option<StateDistribution>,
}

/// Pools the counts of every series and writes the empirical chain.
fn analyze_series(out: &OutDir, runs: &[GammaSeries], partition: &StrategyPartition) -> Result<Analysis> {
    let mut counts = TransitionCounts::zeros(partition.clone());
    for series in runs {
        counts.merge(&count_transitions(series, partition)?)?;
    }
    let pooled = GammaSeries::from_values(runs.iter().flat_map(|s| s.values().iter().copied()).collect())?;
    let occupancy = occupancy_fractions(&pooled, partition)?;
    let empirical = empirical_transition_matrix(&counts);
    let stationary = if is_irreducible(&empirical) {
        Some(stationary_distribution(&empirical)?)
    } else {
        None
    };

    out.write("counts.csv", &counts.to_csv_string()?)?;
    out.write_json("counts.json", &counts)?;
    out.write_json("empirical_matrix.json", &empirical)?;
    out.write("empirical_matrix.csv", &empirical.to_csv())?;
    out.write_json("empirical_stationary.json", &stationary)?;
    match &stationary {
        Some(pi) => {
            out.write("empirical_stationary.csv", &distribution_csv(empirical.labels(), pi.weights()))?;
        }
        None => out.remove("empirical_stationary.csv")?,
    }
    out.write_json("occupancy.json", &occupancy)?;
    out.write("occupancy.csv", &distribution_csv(empirical.labels(), occupancy.weights()))?;

    println!("counts ({} transitions)", counts.total());
    for (label, row) in partition.labels().iter().zip(counts.rows()) {
        println!("  {label:>5}  {row:?}");
    }
    println!("empirical matrix\n{}", empirical.render(2));
    match &stationary {
        Some(pi) => println!("stationary: {}", render_distribution(empirical.labels(), pi.weights(), 2)),
        None => println!("stationary: none (empirical chain is reducible)"),
    }
    println!("occupancy:  {}", render_distribution(empirical.labels(), occupancy.weights(), 2));
    Ok(Analysis { counts, stationary })
}

pub fn analyze(out: &Path, args: &AnalyzeArgs) -> Result<()> {
    let out = OutDir::new(out);
    let partition = load_partition(&args.partition)?;
    let runs = match &args.series {
        Some(path) => vec![read_series(path)?],
        None => run_simulations(&out, "analyze", args.steps, &[args.network.seed], &args.network)?,
    };
    analyze_series(&out, &runs, &partition)?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Verdict {
    Model1,
    Model2,
    Tie,
}

#[derive(Serialize)]
struct CompareReport {
    counts_source: String,
    counts_total: u64,
    length_scale: f64,
    reports: Vec<LikelihoodReport>,
    verdict: Verdict,
}

fn score_models(counts: &TransitionCounts, length_scale: f64) -> Result<(Vec<LikelihoodReport>, Verdict)> {
    let partition = counts.partition();
    let mut reports = Vec::new();
    for (name, kind) in [("model1", ModelKind::Midpoint), ("model2", ModelKind::Kernel)] {
        let m = build_model(kind, partition, KernelConfig::new(length_scale)?)?;
        reports.push(LikelihoodReport::evaluate(name, &m, counts)?);
    }
    let (rl1, rl2) = (reports[0].relative_likelihood, reports[1].relative_likelihood);
    let verdict = if rl1 < rl2 {
        Verdict::Model1
    } else if rl2 < rl1 {
        Verdict::Model2
    } else {
        Verdict::Tie
    };
    Ok((reports, verdict))
}

fn compare_counts(out: &OutDir, counts: &TransitionCounts, source: String, length_scale: f64) -> Result<CompareReport> {
    let (reports, verdict) = score_models(counts, length_scale)?;
    for r in &reports {
        println!("RL({}) = {:.1}", r.model_name, r.relative_likelihood);
    }
    match verdict {
        Verdict::Tie => println!("verdict: tie"),
        v => println!("verdict: {} preferred", if v == Verdict::Model1 { "model1" } else { "model2" }),
    }
    let report = CompareReport {
        counts_source: source,
        counts_total: counts.total(),
        length_scale,
        reports,
        verdict,
    };
    out.write_json("compare.json", &report)?;
    Ok(report)
}

pub fn compare(out: &Path, args: &CompareArgs) -> Result<()> {
    let out = OutDir::new(out);
    let (counts, source) = match &args.counts {
        Some(path) => (read_counts(path, load_partition(&args.partition)?)?, path.display().to_string()),
        None => {
            if args.partition.partition.is_some() {
                bail!("the reference counts are binned on the default partition; pass --counts with --partition");
            }
            (reference_counts(), "reference".to_string())
        }
    };
    compare_counts(&out, &counts, source, args.kernel.length_scale)?;
    Ok(())
}

#[derive(Serialize)]
struct Summary {
    labels: Vec<String>,
    model1: StateDistribution,
    model2: StateDistribution,
    empirical: Option<StateDistribution>,
    verdict: Verdict,
}

pub fn pipeline(out: &Path, args: &PipelineArgs) -> Result<()> {
    let out = OutDir::new(out);
    let partition = load_partition(&args.partition)?;
    let seeds: Vec<u64> = (0..args.replicates).map(|i| args.network.seed + i).collect();
    let runs = run_simulations(&out, "pipeline", args.steps, &seeds, &args.network)?;
    let analysis = analyze_series(&out, &runs, &partition)?;

    let (m1, pi1) = solve_model(ModelKind::Midpoint, &partition, args.kernel.length_scale)?;
    let (m2, pi2) = solve_model(ModelKind::Kernel, &partition, args.kernel.length_scale)?;
    write_model(&out, ModelKind::Midpoint.name(), &m1, &pi1)?;
    write_model(&out, ModelKind::Kernel.name(), &m2, &pi2)?;

    let report = compare_counts(&out, &analysis.counts, "pipeline".to_string(), args.kernel.length_scale)?;

    let labels = partition.labels();
    let mut csv = String::from("state,model1,model2,empirical\n");
    println!("{:>6}  {:>7}  {:>7}  {:>9}", "state", "model1", "model2", "empirical");
    for (i, label) in labels.iter().enumerate() {
        let (a, b) = (pi1.weights()[i], pi2.weights()[i]);
        let c = analysis.stationary.as_ref().map(|pi| pi.weights()[i]);
        csv.push_str(&format!("{label},{a},{b},{}\n", c.map(|c| c.to_string()).unwrap_or_default()));
        let shown = c.map(|c| format!("{c:.2}")).unwrap_or_else(|| "-".into());
        println!("{label:>6}  {a:>7.2}  {b:>7.2}  {shown:>9}");
    }
    out.write("summary.csv", &csv)?;
    out.write_json(
        "summary.json",
        &Summary {
            labels,
            model1: pi1,
            model2: pi2,
            empirical: analysis.stationary,
            verdict: report.verdict,
        },
    )?;
    Ok(())
}
