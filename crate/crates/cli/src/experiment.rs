//! Seeded sweeps over budget, supply and demand, with CSV output and curve
//! property checks.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use anyhow::{bail, Context, Result};
use siteflow::datagen::{generate_instance, sweep, Axis, GenParams, SweepPoint};
use siteflow::fine::evaluate;
use siteflow::{BuildDecision, FineInstance, Power};

pub const DEFAULT_SEEDS: std::ops::RangeInclusive<u64> = 1..=10;

/// Budget fractions of the total build cost: 0, 0.05, ..., 1.
pub fn default_budget_fractions() -> Vec<f64> {
    (0..=20).map(|k| k as f64 / 20.0).collect()
}

/// Supply factors 1, 1.25, ..., 4.
pub fn default_supply_grid() -> Vec<f64> {
    (0..=12).map(|k| 1.0 + k as f64 / 4.0).collect()
}

/// Integer demand factors keep scaled demands exact, so percentages can be
/// compared without rounding noise.
pub fn default_demand_grid() -> Vec<f64> {
    (1..=8).map(f64::from).collect()
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name, passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone)]
pub struct SeedOutcome {
    pub seed: u64,
    pub instance: FineInstance,
    pub points: Vec<SweepPoint>,
    /// The supply sweep stopped before the end of its grid.
    pub terminated_early: bool,
    pub checks: Vec<Check>,
}

impl SeedOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub axis: Axis,
    pub seeds: Vec<u64>,
    /// Explicit grid. Budgets are absolute, in million USD. When `None`,
    /// each axis uses its default grid and budgets scale with the instance's
    /// total build cost.
    pub grid: Option<Vec<f64>>,
    /// Template for generation; the seed is replaced per run.
    pub params: GenParams,
    pub out_dir: Option<PathBuf>,
}

pub fn grid_for(axis: Axis, instance: &FineInstance, explicit: Option<&[f64]>) -> Vec<f64> {
    if let Some(grid) = explicit {
        return grid.to_vec();
    }
    match axis {
        Axis::Budget => {
            let total = instance.total_build_cost().hundredths();
            default_budget_fractions()
                .into_iter()
                .map(|f| (total as f64 * f).round() / 100.0)
                .collect()
        }
        Axis::SupplyScale => default_supply_grid(),
        Axis::DemandScale => default_demand_grid(),
    }
}

pub fn run_seed(config: &ExperimentConfig, seed: u64) -> Result<SeedOutcome> {
    let params = GenParams { seed, ..config.params.clone() };
    let instance = generate_instance(&params).with_context(|| format!("generating instance for seed {seed}"))?;
    let grid = grid_for(config.axis, &instance, config.grid.as_deref());
    let points =
        sweep(&instance, config.axis, &grid).with_context(|| format!("sweeping {} for seed {seed}", config.axis.column_name()))?;
    let terminated_early = points.len() < grid.len();
    let checks = check_curve(config.axis, &instance, &points, config.grid.is_none())?;
    Ok(SeedOutcome { seed, instance, points, terminated_early, checks })
}

/// Runs every seed on its own thread and returns outcomes in seed order.
/// CSVs are written when `out_dir` is set.
pub fn run(config: &ExperimentConfig) -> Result<Vec<SeedOutcome>> {
    if config.seeds.is_empty() {
        bail!("no seeds given");
    }
    let outcomes: Vec<Result<SeedOutcome>> = thread::scope(|scope| {
        let handles: Vec<_> = config.seeds.iter().map(|&seed| scope.spawn(move || run_seed(config, seed))).collect();
        handles.into_iter().map(|h| h.join().expect("sweep thread panicked")).collect()
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    if let Some(dir) = &config.out_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for outcome in &outcomes {
            let path = csv_path(dir, config.axis, outcome.seed);
            fs::write(&path, csv_string(config.axis, &outcome.points)?)
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(outcomes)
}

pub fn csv_path(dir: &Path, axis: Axis, seed: u64) -> PathBuf {
    dir.join(format!("{}_seed{seed}.csv", axis.column_name()))
}

pub fn csv_string(axis: Axis, points: &[SweepPoint]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([axis.column_name(), "objective_mw", "demand_met_percent", "total_cost", "solve_time_ms"])?;
    for p in points {
        let value = match axis {
            Axis::Budget => format!("{:.2}", p.value),
            _ => format!("{}", p.value),
        };
        writer.write_record([
            value,
            p.solution.objective.to_string(),
            format!("{:.4}", p.solution.demand_met_percent),
            p.solution.total_cost.to_string(),
            format!("{:.3}", p.elapsed.as_secs_f64() * 1000.0),
        ])?;
    }
    Ok(String::from_utf8(writer.into_inner()?)?)
}

/// One line per seed, for the command's stdout.
pub fn summary(axis: Axis, outcomes: &[SeedOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        let last = o.points.last().expect("sweeps are never empty");
        let _ = write!(
            out,
            "seed {:>3}  {} points  final {} MW ({:.2}%)",
            o.seed,
            o.points.len(),
            last.solution.objective,
            last.solution.demand_met_percent
        );
        if axis == Axis::SupplyScale && o.terminated_early {
            out.push_str("  saturated early");
        }
        for c in o.checks.iter().filter(|c| !c.passed) {
            let _ = write!(out, "\n    FAILED {}: {}", c.name, c.detail);
        }
        out.push('\n');
    }
    out
}

fn objectives(points: &[SweepPoint]) -> Vec<i64> {
    points.iter().map(|p| p.solution.objective.hundredths()).collect()
}

fn first_drop(values: &[i64]) -> Option<usize> {
    values.windows(2).position(|w| w[1] < w[0])
}

fn describe(points: &[SweepPoint], at: usize) -> String {
    format!(
        "objective falls from {} at {} to {} at {}",
        points[at].solution.objective, points[at].value, points[at + 1].solution.objective, points[at + 1].value
    )
}

/// Property checks on a finished sweep. Percentages are compared as exact
/// fractions of hundredths.
///
/// `full_budget_grid` says the budget grid ends at the total build cost, so
/// the last point must reach the all-built flow.
pub fn check_curve(
    axis: Axis,
    instance: &FineInstance,
    points: &[SweepPoint],
    full_budget_grid: bool,
) -> Result<Vec<Check>> {
    let obj = objectives(points);
    let mut checks = Vec::new();
    let in_range = points.iter().all(|p| (0.0..=100.0).contains(&p.solution.demand_met_percent));
    checks.push(Check::new("percent_in_range", in_range, "demand_met_percent outside [0, 100]"));
    match axis {
        Axis::Budget => {
            let drop = first_drop(&obj);
            checks.push(Check::new(
                "budget_nondecreasing",
                drop.is_none(),
                drop.map(|i| describe(points, i)).unwrap_or_default(),
            ));
            if full_budget_grid {
                let all_built: i64 = evaluate(instance, &BuildDecision::everything(instance))?
                    .iter()
                    .map(|r| r.total_flow)
                    .sum();
                let last = *obj.last().expect("sweeps are never empty");
                checks.push(Check::new(
                    "budget_saturates",
                    last == all_built && obj.iter().all(|&v| v <= last),
                    format!(
                        "final objective {} but building everything delivers {}",
                        Power::from_hundredths(last),
                        Power::from_hundredths(all_built)
                    ),
                ));
            }
        }
        Axis::SupplyScale => {
            let drop = first_drop(&obj);
            checks.push(Check::new(
                "supply_nondecreasing",
                drop.is_none(),
                drop.map(|i| describe(points, i)).unwrap_or_default(),
            ));
        }
        Axis::DemandScale => {
            let drop = first_drop(&obj);
            checks.push(Check::new(
                "demand_objective_nondecreasing",
                drop.is_none(),
                drop.map(|i| describe(points, i)).unwrap_or_default(),
            ));
            let demand: Vec<i64> = points
                .iter()
                .map(|p| siteflow::datagen::scale_demand(instance, p.value).total_demand().hundredths())
                .collect();
            // F_k / D_k >= F_{k+1} / D_{k+1}, with a zero-demand ratio read as 0.
            let rise = (0..points.len().saturating_sub(1)).find(|&k| {
                let (f0, d0, f1, d1) = (obj[k] as i128, demand[k] as i128, obj[k + 1] as i128, demand[k + 1] as i128);
                match (d0 == 0, d1 == 0) {
                    (_, true) => false,
                    (true, false) => f1 > 0,
                    (false, false) => f0 * d1 < f1 * d0,
                }
            });
            checks.push(Check::new(
                "demand_percent_nonincreasing",
                rise.is_none(),
                rise.map(|k| {
                    format!(
                        "percent rises from {:.4} at {} to {:.4} at {}",
                        points[k].solution.demand_met_percent,
                        points[k].value,
                        points[k + 1].solution.demand_met_percent,
                        points[k + 1].value
                    )
                })
                .unwrap_or_default(),
            ));
        }
    }
    Ok(checks)
}
