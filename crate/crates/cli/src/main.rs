use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use siteflow::coarse::Method;
use siteflow::datagen::{Axis, GenParams, ScatterParams};
use siteflow::{Metric, Money};
use siteflow_cli::experiment::{self, ExperimentConfig};

#[derive(Parser)]
#[command(name = "siteflow", version, about = "Budgeted generation-site selection solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Iu,
    Csiu,
    Msiu,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Iu => Metric::Iu,
            MetricArg::Csiu => Metric::Csiu,
            MetricArg::Msiu => Metric::Msiu,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Greedy,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Coarse,
    Fine,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    Budget,
    Supply,
    Demand,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::Budget => Axis::Budget,
            AxisArg::Supply => Axis::SupplyScale,
            AxisArg::Demand => Axis::DemandScale,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Select sites on a coarse instance and print the selection as JSON.
    SolveCoarse {
        instance: PathBuf,
        #[arg(long, value_enum)]
        metric: MetricArg,
        #[arg(long, value_enum, default_value = "greedy")]
        method: MethodArg,
        /// Override the instance's site budget.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Solve a fine instance exactly and print the build plan as JSON.
    SolveFine {
        instance: PathBuf,
        /// Override the instance's budget, in million USD.
        #[arg(long)]
        budget: Option<Money>,
    },
    /// Generate a seeded instance file.
    Generate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "fine")]
        kind: KindArg,
        #[arg(long)]
        sites: Option<usize>,
        #[arg(long)]
        loads: Option<usize>,
        #[arg(long)]
        periods: Option<usize>,
        /// Million USD for fine instances, a site count for coarse ones.
        #[arg(long)]
        budget: Option<String>,
        /// Coverage radius in km (coarse only).
        #[arg(long)]
        radius: Option<f64>,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one axis over seeded default instances and write one CSV per seed.
    Experiment {
        #[arg(long, value_enum)]
        axis: AxisArg,
        /// Comma-separated seeds or inclusive ranges, e.g. `1-10` or `3,7,9`.
        #[arg(long, default_value = "1-10")]
        seeds: String,
        /// Comma-separated grid values. Budgets are in million USD.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        #[arg(long)]
        sites: Option<usize>,
        #[arg(long)]
        loads: Option<usize>,
        #[arg(long)]
        periods: Option<usize>,
        /// Directory for the CSVs.
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
}

fn parse_seeds(spec: &str) -> Result<Vec<u64>> {
    let mut seeds = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((lo, hi)) => {
                let lo: u64 = lo.trim().parse().with_context(|| format!("bad seed range {part:?}"))?;
                let hi: u64 = hi.trim().parse().with_context(|| format!("bad seed range {part:?}"))?;
                if lo > hi {
                    bail!("empty seed range {part:?}");
                }
                seeds.extend(lo..=hi);
            }
            None => seeds.push(part.parse().with_context(|| format!("bad seed {part:?}"))?),
        }
    }
    if seeds.is_empty() {
        bail!("--seeds is empty");
    }
    Ok(seeds)
}

fn params(seed: u64, sites: Option<usize>, loads: Option<usize>, periods: Option<usize>) -> GenParams {
    let mut p = GenParams::with_seed(seed);
    p.n_sites = sites.unwrap_or(p.n_sites);
    p.m_loads = loads.unwrap_or(p.m_loads);
    p.num_periods = periods.unwrap_or(p.num_periods);
    p
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::SolveCoarse { instance, metric, method, budget } => {
            let method = match method {
                MethodArg::Greedy => Method::Greedy,
                MethodArg::Exhaustive => Method::Exhaustive,
            };
            let cap = siteflow_cli::enumeration_cap()?;
            print!("{}", siteflow_cli::solve_coarse(&instance, metric.into(), method, budget, cap)?);
        }
        Command::SolveFine { instance, budget } => {
            print!("{}", siteflow_cli::solve_fine(&instance, budget)?);
        }
        Command::Generate { seed, kind, sites, loads, periods, budget, radius, out } => {
            let mut p = params(seed, sites, loads, periods);
            let file = match kind {
                KindArg::Fine => {
                    if radius.is_some() {
                        bail!("--radius only applies to coarse instances");
                    }
                    p.budget = budget.map(|b| b.parse::<Money>()).transpose().context("--budget")?;
                    siteflow_cli::generate(&p, None)?
                }
                KindArg::Coarse => {
                    let mut scatter = ScatterParams { seed, ..ScatterParams::default() };
                    if let Some(b) = budget {
                        scatter.budget = b.parse().context("--budget must be a site count for coarse instances")?;
                    }
                    scatter.radius_km = radius.unwrap_or(scatter.radius_km);
                    siteflow_cli::generate(&p, Some(&scatter))?
                }
            };
            match out {
                Some(path) => file.save(&path)?,
                None => print!("{}", file.to_json()?),
            }
        }
        Command::Experiment { axis, seeds, grid, sites, loads, periods, out } => {
            let axis = Axis::from(axis);
            let config = ExperimentConfig {
                axis,
                seeds: parse_seeds(&seeds)?,
                grid,
                params: params(0, sites, loads, periods),
                out_dir: Some(out.clone()),
            };
            let outcomes = experiment::run(&config)?;
            print!("{}", experiment::summary(axis, &outcomes));
            let failed = outcomes.iter().filter(|o| !o.passed()).count();
            println!("wrote {} CSV files to {}", outcomes.len(), out.display());
            if failed > 0 {
                eprintln!("{failed} of {} seeds failed a property check", outcomes.len());
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
