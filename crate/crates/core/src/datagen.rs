//! Seeded synthetic instances and parameter sweeps.
//!
//! Generation uses ChaCha8 (`rand_chacha`) seeded through
//! `SeedableRng::seed_from_u64`, with one stream per parameter family:
//!
//! | stream | family                          |
//! |--------|---------------------------------|
//! | 1      | site build cost                 |
//! | 2      | site base capacity              |
//! | 3      | per-period generation           |
//! | 4      | line capacity                   |
//! | 5      | line build cost                 |
//! | 6      | load base and per-period demand |
//! | 7      | coarse-instance site locations  |
//!
//! Every quantity is drawn as a whole number of hundredths, uniformly over
//! its range by rejection sampling, then shifted by a uniform offset in
//! `[-sigma, +sigma]` from the variance vector and clamped back to the range.
//! The same seed and parameters always give the same instance.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::coverage::{CandidateSite, CoarseInstance, DemandPoint, Point2D};
use crate::error::{Error, Result};
use crate::fine::{solve, FineSolution};
use crate::network::{FineInstance, Line, Load, Site};
use crate::units::{Money, Power};

pub const GENERATOR_NAME: &str = "chacha8-streams-v1";

/// Maximum uniform perturbation per parameter family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarianceVector {
    pub site_cost: Money,
    pub site_capacity: Power,
    pub generation: Power,
    pub line_capacity: Power,
    pub line_cost: Money,
    pub demand: Power,
}

impl VarianceVector {
    pub fn zero() -> Self {
        VarianceVector {
            site_cost: Money::ZERO,
            site_capacity: Power::ZERO,
            generation: Power::ZERO,
            line_capacity: Power::ZERO,
            line_cost: Money::ZERO,
            demand: Power::ZERO,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub seed: u64,
    pub n_sites: usize,
    pub m_loads: usize,
    pub num_periods: usize,
    pub site_capacity_range: [Power; 2],
    pub site_cost_range: [Money; 2],
    pub line_cost_range: [Money; 2],
    pub line_capacity_choices: Vec<Power>,
    pub demand_range: [Power; 2],
    pub variance: VarianceVector,
    /// Budget of the generated instance; half the total site cost when absent.
    pub budget: Option<Money>,
}

/// Ten percent of a range's width, to the hundredth.
fn tenth_of<T: Copy>(range: [T; 2], hundredths: impl Fn(T) -> i64) -> i64 {
    let width = hundredths(range[1]) - hundredths(range[0]);
    (width + 5) / 10
}

impl Default for GenParams {
    fn default() -> Self {
        let site_capacity_range = [Power::from_units(15), Power::from_units(403)];
        let site_cost_range = [Money::from_hundredths(1363), Money::from_hundredths(40214)];
        let line_cost_range = [Money::from_hundredths(127), Money::from_hundredths(11730)];
        let line_capacity_choices = [250, 500, 750, 1000].map(Power::from_units).to_vec();
        let demand_range = [Power::ZERO, Power::from_hundredths(405748)];
        let line_capacity_range = [Power::from_units(250), Power::from_units(1000)];
        let variance = VarianceVector {
            site_cost: Money::from_hundredths(tenth_of(site_cost_range, Money::hundredths)),
            site_capacity: Power::from_hundredths(tenth_of(site_capacity_range, Power::hundredths)),
            generation: Power::from_hundredths(tenth_of(site_capacity_range, Power::hundredths)),
            line_capacity: Power::from_hundredths(tenth_of(line_capacity_range, Power::hundredths)),
            line_cost: Money::from_hundredths(tenth_of(line_cost_range, Money::hundredths)),
            demand: Power::from_hundredths(tenth_of(demand_range, Power::hundredths)),
        };
        GenParams {
            seed: 0,
            n_sites: 14,
            m_loads: 9,
            num_periods: 12,
            site_capacity_range,
            site_cost_range,
            line_cost_range,
            line_capacity_choices,
            demand_range,
            variance,
            budget: None,
        }
    }
}

impl GenParams {
    pub fn with_seed(seed: u64) -> Self {
        GenParams { seed, ..GenParams::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParams(msg.to_string()));
        if self.num_periods == 0 {
            return bad("num_periods must be positive");
        }
        if self.site_capacity_range[0] > self.site_capacity_range[1] || self.site_capacity_range[0] < Power::ZERO {
            return bad("site_capacity_range must be a nonempty nonnegative range");
        }
        if self.site_cost_range[0] > self.site_cost_range[1] || self.site_cost_range[0] < Money::ZERO {
            return bad("site_cost_range must be a nonempty nonnegative range");
        }
        if self.line_cost_range[0] > self.line_cost_range[1] || self.line_cost_range[0] < Money::ZERO {
            return bad("line_cost_range must be a nonempty nonnegative range");
        }
        if self.demand_range[0] > self.demand_range[1] || self.demand_range[0] < Power::ZERO {
            return bad("demand_range must be a nonempty nonnegative range");
        }
        if self.line_capacity_choices.is_empty() || self.line_capacity_choices.iter().any(|c| *c < Power::ZERO) {
            return bad("line_capacity_choices must be nonempty and nonnegative");
        }
        let v = &self.variance;
        if [v.site_cost.hundredths(), v.line_cost.hundredths()].iter().any(|x| *x < 0)
            || [v.site_capacity, v.generation, v.line_capacity, v.demand].iter().any(|x| *x < Power::ZERO)
        {
            return bad("variance entries must be nonnegative");
        }
        if self.budget.is_some_and(|b| b < Money::ZERO) {
            return bad("budget must be nonnegative");
        }
        Ok(())
    }

    fn line_capacity_range(&self) -> [i64; 2] {
        let lo = self.line_capacity_choices.iter().min().copied().unwrap_or(Power::ZERO);
        let hi = self.line_capacity_choices.iter().max().copied().unwrap_or(Power::ZERO);
        [lo.hundredths(), hi.hundredths()]
    }
}

struct Stream(ChaCha8Rng);

impl Stream {
    fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Stream(rng)
    }

    /// Uniform integer in `[lo, hi]`.
    fn uniform(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        // Largest multiple of `span` that fits in u64 space.
        let zone = u64::MAX - (u64::MAX - span + 1) % span;
        loop {
            let x = self.0.next_u64();
            if x <= zone {
                return lo + (x % span) as i64;
            }
        }
    }

    fn jitter(&mut self, value: i64, sigma: i64, range: [i64; 2]) -> i64 {
        let offset = if sigma > 0 { self.uniform(-sigma, sigma) } else { 0 };
        (value + offset).clamp(range[0], range[1])
    }

    /// Uniform float in `[0, 1)` with 53 bits of precision.
    fn unit_f64(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

pub fn generate_instance(params: &GenParams) -> Result<FineInstance> {
    params.validate()?;
    let p = params;
    let cost_range = p.site_cost_range.map(Money::hundredths);
    let cap_range = p.site_capacity_range.map(Power::hundredths);
    let line_cost_range = p.line_cost_range.map(Money::hundredths);
    let line_cap_range = p.line_capacity_range();
    let demand_range = p.demand_range.map(Power::hundredths);
    let v = &p.variance;

    let mut cost_rng = Stream::new(p.seed, 1);
    let mut cap_rng = Stream::new(p.seed, 2);
    let mut gen_rng = Stream::new(p.seed, 3);
    let mut line_cap_rng = Stream::new(p.seed, 4);
    let mut line_cost_rng = Stream::new(p.seed, 5);
    let mut demand_rng = Stream::new(p.seed, 6);

    let sites: Vec<Site> = (0..p.n_sites)
        .map(|id| {
            let base_cost = cost_rng.uniform(cost_range[0], cost_range[1]);
            let cost = cost_rng.jitter(base_cost, v.site_cost.hundredths(), cost_range);
            let base_cap = cap_rng.uniform(cap_range[0], cap_range[1]);
            let base_cap = cap_rng.jitter(base_cap, v.site_capacity.hundredths(), cap_range);
            let capacity_by_period = (0..p.num_periods)
                .map(|_| Power::from_hundredths(gen_rng.jitter(base_cap, v.generation.hundredths(), cap_range)))
                .collect();
            Site { id, build_cost: Money::from_hundredths(cost), capacity_by_period }
        })
        .collect();

    let lines = (0..p.n_sites)
        .map(|_| {
            (0..p.m_loads)
                .map(|_| {
                    let pick = line_cap_rng.uniform(0, p.line_capacity_choices.len() as i64 - 1) as usize;
                    let cap = p.line_capacity_choices[pick].hundredths();
                    let cap = line_cap_rng.jitter(cap, v.line_capacity.hundredths(), line_cap_range);
                    let base_cost = line_cost_rng.uniform(line_cost_range[0], line_cost_range[1]);
                    let cost = line_cost_rng.jitter(base_cost, v.line_cost.hundredths(), line_cost_range);
                    Line { build_cost: Money::from_hundredths(cost), capacity: Power::from_hundredths(cap) }
                })
                .collect()
        })
        .collect();

    let loads = (0..p.m_loads)
        .map(|id| {
            let base = demand_rng.uniform(demand_range[0], demand_range[1]);
            let demand_by_period = (0..p.num_periods)
                .map(|_| Power::from_hundredths(demand_rng.jitter(base, v.demand.hundredths(), demand_range)))
                .collect();
            Load { id, demand_by_period }
        })
        .collect();

    let budget = p.budget.unwrap_or_else(|| {
        let total: Money = sites.iter().map(|s| s.build_cost).sum();
        Money::from_hundredths(total.hundredths() / 2)
    });
    let instance = FineInstance { sites, loads, lines, budget, num_periods: p.num_periods };
    instance.validate()?;
    Ok(instance)
}

/// How a fine instance is turned into a coarse one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterParams {
    pub seed: u64,
    /// Locations are uniform in `[0, side_km]²`.
    pub side_km: f64,
    pub radius_km: f64,
    /// Capped at the number of sites.
    pub budget: usize,
    /// A load has unit demand in a period when its demand reaches this level.
    pub demand_threshold: Power,
}

impl Default for ScatterParams {
    fn default() -> Self {
        ScatterParams {
            seed: 0,
            side_km: 100.0,
            radius_km: 25.0,
            budget: 3,
            demand_threshold: Power::from_hundredths(202874),
        }
    }
}

/// Coarse instance whose sites and demand points are the fine instance's
/// sites and loads, scattered in a square, with demand thresholded to 0/1.
pub fn coarse_from_fine(fine: &FineInstance, scatter: &ScatterParams) -> Result<CoarseInstance> {
    if !(scatter.side_km.is_finite() && scatter.side_km > 0.0) {
        return Err(Error::InvalidParams("side_km must be positive".into()));
    }
    let mut rng = Stream::new(scatter.seed, 7);
    // Coordinates are snapped to whole metres.
    let place = |rng: &mut Stream| {
        let x = (rng.unit_f64() * scatter.side_km * 1000.0).round() / 1000.0;
        let y = (rng.unit_f64() * scatter.side_km * 1000.0).round() / 1000.0;
        Point2D::new(x, y)
    };
    let sites = (0..fine.num_sites()).map(|id| CandidateSite { id, location: place(&mut rng) }).collect();
    let demand_points = fine
        .loads
        .iter()
        .map(|load| DemandPoint {
            id: load.id,
            location: place(&mut rng),
            demand_by_subinterval: load
                .demand_by_period
                .iter()
                .map(|d| u8::from(*d >= scatter.demand_threshold))
                .collect(),
        })
        .collect();
    CoarseInstance::new(
        sites,
        demand_points,
        scatter.radius_km,
        fine.num_periods,
        scatter.budget.min(fine.num_sites()),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Budget,
    SupplyScale,
    DemandScale,
}

impl Axis {
    pub fn column_name(self) -> &'static str {
        match self {
            Axis::Budget => "budget",
            Axis::SupplyScale => "supply_scale",
            Axis::DemandScale => "demand_scale",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub solution: FineSolution,
    pub elapsed: std::time::Duration,
}

pub fn with_budget(instance: &FineInstance, budget: f64) -> Result<FineInstance> {
    let budget = Money::from_hundredths((budget * 100.0).round() as i64);
    Ok(FineInstance { budget, ..instance.clone() })
}

/// Multiplies every per-period capacity by `factor`, capped at that site's
/// maximum capacity. The flag reports whether every capacity ended at the cap.
pub fn scale_supply(instance: &FineInstance, factor: f64) -> (FineInstance, bool) {
    let mut scaled = instance.clone();
    let mut saturated = true;
    for site in &mut scaled.sites {
        let max = site.max_capacity().hundredths();
        for cap in &mut site.capacity_by_period {
            let v = ((cap.hundredths() as f64) * factor).round() as i64;
            let v = v.min(max);
            saturated &= v == max;
            *cap = Power::from_hundredths(v);
        }
    }
    (scaled, saturated)
}

pub fn scale_demand(instance: &FineInstance, factor: f64) -> FineInstance {
    let mut scaled = instance.clone();
    for load in &mut scaled.loads {
        for d in &mut load.demand_by_period {
            *d = Power::from_hundredths(((d.hundredths() as f64) * factor).round() as i64);
        }
    }
    scaled
}

/// Solves `instance` at each grid value along `axis`, in grid order.
///
/// Budgets are in million USD. On the supply axis the sweep ends at the first
/// grid value where every site is already at its maximum capacity, since
/// larger factors cannot change the instance.
pub fn sweep(instance: &FineInstance, axis: Axis, grid: &[f64]) -> Result<Vec<SweepPoint>> {
    if grid.is_empty() {
        return Err(Error::InvalidParams("sweep grid is empty".into()));
    }
    if let Some(bad) = grid.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::InvalidParams(format!("sweep value {bad} must be finite and nonnegative")));
    }
    let mut points = Vec::with_capacity(grid.len());
    for &value in grid {
        let (scaled, last) = match axis {
            Axis::Budget => (with_budget(instance, value)?, false),
            Axis::SupplyScale => scale_supply(instance, value),
            Axis::DemandScale => (scale_demand(instance, value), false),
        };
        let start = std::time::Instant::now();
        let solution = solve(&scaled)?;
        points.push(SweepPoint { value, solution, elapsed: start.elapsed() });
        if last {
            break;
        }
    }
    Ok(points)
}
