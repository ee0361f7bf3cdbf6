//! JSON reports printed by the solve commands.

use anyhow::Result;
use serde::Serialize;
use siteflow::coarse::CoarseSolution;
use siteflow::fine::{evaluate, IncumbentOrigin};
use siteflow::metrics::coverage_counts;
use siteflow::{CoarseInstance, FineInstance, FineSolution, Metric, Money, Power, SearchStats};

#[derive(Debug, Serialize)]
pub struct SubintervalCoverage {
    pub subinterval: usize,
    pub covered: u64,
    pub total: u64,
    /// `None` when the sub-interval has no demand.
    pub ratio: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct CoarseReport {
    pub metric: Metric,
    pub method: String,
    pub budget: usize,
    pub selected_sites: Vec<usize>,
    pub objective: f64,
    /// Objective as a reduced fraction.
    pub objective_exact: String,
    pub subinterval_coverage: Vec<SubintervalCoverage>,
}

impl CoarseReport {
    pub fn new(instance: &CoarseInstance, solution: &CoarseSolution) -> Result<Self> {
        let counts = coverage_counts(&solution.selected_sites, instance)?;
        let subinterval_coverage = counts
            .covered
            .iter()
            .zip(&counts.total)
            .enumerate()
            .map(|(t, (&covered, &total))| SubintervalCoverage {
                subinterval: t,
                covered,
                total,
                ratio: (total > 0).then(|| covered as f64 / total as f64),
            })
            .collect();
        Ok(CoarseReport {
            metric: solution.objective.kind,
            method: solution.method.to_string(),
            budget: instance.budget,
            selected_sites: solution.selected_sites.iter().copied().collect(),
            objective: solution.objective.to_f64(),
            objective_exact: solution.objective.value.to_string(),
            subinterval_coverage,
        })
    }
}

#[derive(Debug, Serialize)]
pub struct LineFlow {
    pub site: usize,
    pub load: usize,
    pub flow: Power,
}

#[derive(Debug, Serialize)]
pub struct PeriodReport {
    pub period: usize,
    pub total_flow: Power,
    pub demand: Power,
    pub line_flows: Vec<LineFlow>,
}

#[derive(Debug, Serialize)]
pub struct FineReport {
    pub budget: Money,
    pub built_sites: Vec<usize>,
    pub built_lines: Vec<[usize; 2]>,
    pub total_cost: Money,
    pub objective: Power,
    pub total_demand: Power,
    pub demand_met_percent: f64,
    pub root_bound: Power,
    pub origin: IncumbentOrigin,
    pub search_stats: SearchStats,
    pub periods: Vec<PeriodReport>,
}

impl FineReport {
    pub fn new(instance: &FineInstance, solution: &FineSolution) -> Result<Self> {
        let flows = evaluate(instance, &solution.decision)?;
        let periods = flows
            .iter()
            .enumerate()
            .map(|(t, result)| {
                let line_flows = solution
                    .decision
                    .built_lines()
                    .into_iter()
                    .map(|(i, j)| {
                        let arc = instance.num_sites() + i * instance.num_loads() + j;
                        LineFlow { site: i, load: j, flow: Power::from_hundredths(result.arc_flow[arc]) }
                    })
                    .filter(|lf| lf.flow > Power::ZERO)
                    .collect();
                PeriodReport {
                    period: t,
                    total_flow: result.total_power(),
                    demand: instance.loads.iter().map(|l| l.demand_by_period[t]).sum(),
                    line_flows,
                }
            })
            .collect();
        Ok(FineReport {
            budget: instance.budget,
            built_sites: solution.decision.built_sites(),
            built_lines: solution.decision.built_lines().into_iter().map(|(i, j)| [i, j]).collect(),
            total_cost: solution.total_cost,
            objective: solution.objective,
            total_demand: instance.total_demand(),
            demand_met_percent: solution.demand_met_percent,
            root_bound: solution.root_bound,
            origin: solution.origin,
            search_stats: solution.stats,
            periods,
        })
    }
}

pub fn to_json<T: Serialize>(report: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    Ok(text)
}
