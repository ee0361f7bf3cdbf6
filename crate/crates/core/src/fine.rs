//! Exact budgeted site-and-line selection.
//!
//! The objective is the total max flow summed over periods, with one build
//! decision shared by all periods and build costs charged once. [`solve`]
//! runs a depth-first branch-and-bound over the binary build variables;
//! [`brute_force_solve`] enumerates every feasible decision and exists as a
//! reference for small instances.
//!
//! Branching visits every site variable before any line variable. Within each
//! group variables are ordered by capacity per unit cost, highest first, ties
//! by id, and the "build" branch is explored first. A node is pruned when its
//! upper bound does not exceed the incumbent, so the first optimum found is
//! the one reported.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::{build_network, max_flow, BuildDecision, FineInstance, FlowNetwork, FlowResult};
use crate::units::{Money, Power};

/// Hard limits for [`brute_force_solve`].
pub const BRUTE_FORCE_MAX_SITES: usize = 5;
pub const BRUTE_FORCE_MAX_LOADS: usize = 4;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes_explored: u64,
    pub nodes_pruned: u64,
    /// Nodes where the max-flow relaxation had to be solved because the
    /// budget bound alone could not prune.
    pub flow_bounds: u64,
}

/// Where the reported decision came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IncumbentOrigin {
    /// Nothing built; no decision with positive flow was found.
    Empty,
    /// The greedy warm start was never improved on.
    WarmStart,
    Search,
    Enumeration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FineSolution {
    #[serde(skip)]
    pub decision: BuildDecision,
    pub flow_by_period: Vec<Power>,
    /// Sum of `flow_by_period`.
    pub objective: Power,
    pub total_cost: Money,
    /// Objective as a percentage of total demand over all periods.
    pub demand_met_percent: f64,
    /// Upper bound at the root of the search, in the objective's units.
    pub root_bound: Power,
    pub origin: IncumbentOrigin,
    pub stats: SearchStats,
}

/// A decision with some variables left open (`None`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialDecision {
    pub sites: Vec<Option<bool>>,
    pub lines: Vec<Vec<Option<bool>>>,
}

impl PartialDecision {
    pub fn undecided(instance: &FineInstance) -> Self {
        PartialDecision {
            sites: vec![None; instance.num_sites()],
            lines: vec![vec![None; instance.num_loads()]; instance.num_sites()],
        }
    }

    pub fn from_decision(decision: &BuildDecision) -> Self {
        PartialDecision {
            sites: decision.sites.iter().map(|&x| Some(x)).collect(),
            lines: decision.lines.iter().map(|row| row.iter().map(|&y| Some(y)).collect()).collect(),
        }
    }
}

/// Max flow of every period under `decision`.
pub fn evaluate(instance: &FineInstance, decision: &BuildDecision) -> Result<Vec<FlowResult>> {
    (0..instance.num_periods).map(|t| build_network(instance, decision, t).map(|net| max_flow(&net))).collect()
}

fn summarize(
    instance: &FineInstance,
    decision: BuildDecision,
    root_bound: i64,
    origin: IncumbentOrigin,
    stats: SearchStats,
) -> Result<FineSolution> {
    let flows = evaluate(instance, &decision)?;
    let flow_by_period: Vec<Power> = flows.iter().map(FlowResult::total_power).collect();
    let objective: Power = flow_by_period.iter().sum();
    let demand = instance.total_demand();
    let demand_met_percent =
        if demand > Power::ZERO { 100.0 * objective.hundredths() as f64 / demand.hundredths() as f64 } else { 0.0 };
    Ok(FineSolution {
        total_cost: decision.cost(instance),
        decision,
        flow_by_period,
        objective,
        demand_met_percent,
        root_bound: Power::from_hundredths(root_bound),
        origin,
        stats,
    })
}

/// Upper bound on the objective of any budget-feasible completion of
/// `partial`.
///
/// Every open variable is treated as built, except those whose own cost is
/// more than the budget left after `committed_cost` and lines whose site is
/// closed. Flow is monotone in capacity, so the result never falls below the
/// best completion.
pub fn relaxation_bound(instance: &FineInstance, partial: &PartialDecision, committed_cost: Money) -> i64 {
    let remaining = instance.budget - committed_cost;
    let site_open: Vec<bool> = instance
        .sites
        .iter()
        .zip(&partial.sites)
        .map(|(s, x)| x.unwrap_or(s.build_cost <= remaining))
        .collect();
    let line_open: Vec<Vec<bool>> = instance
        .lines
        .iter()
        .zip(&partial.lines)
        .enumerate()
        .map(|(i, (row, ys))| {
            row.iter().zip(ys).map(|(l, y)| site_open[i] && y.unwrap_or(l.build_cost <= remaining)).collect()
        })
        .collect();
    (0..instance.num_periods).map(|t| period_flow(instance, &site_open, &line_open, t)).sum()
}

fn period_flow(instance: &FineInstance, site_open: &[bool], line_open: &[Vec<bool>], t: usize) -> i64 {
    max_flow(&period_network(instance, site_open, line_open, t)).total_flow
}

fn period_network(instance: &FineInstance, site_open: &[bool], line_open: &[Vec<bool>], t: usize) -> FlowNetwork {
    let supply: Vec<i64> = instance
        .sites
        .iter()
        .zip(site_open)
        .map(|(s, &open)| if open { s.capacity_by_period[t].hundredths() } else { 0 })
        .collect();
    let lines: Vec<Vec<i64>> = instance
        .lines
        .iter()
        .zip(line_open)
        .map(|(row, open)| row.iter().zip(open).map(|(l, &o)| if o { l.capacity.hundredths() } else { 0 }).collect())
        .collect();
    let demand: Vec<i64> = instance.loads.iter().map(|l| l.demand_by_period[t].hundredths()).collect();
    FlowNetwork::from_capacities(&supply, &lines, &demand)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    Site(usize),
    Line(usize, usize),
}

/// Descending `value / cost`, comparing by cross-multiplication.
fn by_ratio_desc(a_value: i64, a_cost: i64, b_value: i64, b_cost: i64) -> Ordering {
    let lhs = i128::from(a_value) * i128::from(b_cost);
    let rhs = i128::from(b_value) * i128::from(a_cost);
    rhs.cmp(&lhs)
}

fn branch_order(instance: &FineInstance) -> Vec<Var> {
    let mut sites: Vec<usize> = (0..instance.num_sites()).collect();
    let site_value = |i: usize| instance.sites[i].capacity_by_period.iter().map(|c| c.hundredths()).sum::<i64>();
    sites.sort_by(|&a, &b| {
        by_ratio_desc(
            site_value(a),
            instance.sites[a].build_cost.hundredths(),
            site_value(b),
            instance.sites[b].build_cost.hundredths(),
        )
        .then(a.cmp(&b))
    });
    let mut lines: Vec<(usize, usize)> =
        (0..instance.num_sites()).flat_map(|i| (0..instance.num_loads()).map(move |j| (i, j))).collect();
    lines.sort_by(|&a, &b| {
        let la = instance.lines[a.0][a.1];
        let lb = instance.lines[b.0][b.1];
        by_ratio_desc(la.capacity.hundredths(), la.build_cost.hundredths(), lb.capacity.hundredths(), lb.build_cost.hundredths())
            .then(a.cmp(&b))
    });
    sites.into_iter().map(Var::Site).chain(lines.into_iter().map(|(i, j)| Var::Line(i, j))).collect()
}

/// What one site can still add: per period, a line set `S` adds
/// `min(room[t], sum_{j in S} lines[j].0[t])`, at a cost of `entry_cost` plus
/// its line costs when `S` is not empty.
struct SiteGains {
    room: Vec<i64>,
    lines: Vec<(Vec<i64>, i64)>,
    entry_cost: i64,
}

impl SiteGains {
    fn gain<'l>(&self, lines: impl Iterator<Item = &'l [i64]> + Clone) -> i64 {
        self.room.iter().enumerate().map(|(t, &r)| r.min(lines.clone().map(|l| l[t]).sum())).sum()
    }

    fn top(&self) -> i64 {
        self.gain(self.lines.iter().map(|l| &l.0[..]))
    }

    /// Pareto-optimal `(cost, gain)` pairs over every line subset, starting
    /// at `(0, 0)`, or `None` above [`OPTION_MAX_LINES`] lines.
    fn options(&self) -> Option<Vec<(i64, i64)>> {
        let k = self.lines.len();
        if k > OPTION_MAX_LINES {
            return None;
        }
        let periods = self.room.len();
        let mut sums = vec![0i64; periods << k];
        let mut costs = vec![0i64; 1 << k];
        let mut points: Vec<(i64, i64)> = Vec::with_capacity(1 << k);
        for mask in 1usize..1 << k {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let (cap, cost) = &self.lines[low];
            for t in 0..periods {
                sums[mask * periods + t] = sums[rest * periods + t] + cap[t];
            }
            costs[mask] = costs[rest] + cost;
            let sum = &sums[mask * periods..(mask + 1) * periods];
            let gain = self.room.iter().zip(sum).map(|(&r, &s)| r.min(s)).sum();
            points.push((self.entry_cost + costs[mask], gain));
        }
        points.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let mut pareto = vec![(0, 0)];
        for (cost, gain) in points {
            if gain > pareto.last().map_or(0, |p| p.1) {
                pareto.push((cost, gain));
            }
        }
        Some(pareto)
    }
}

/// Above this many candidate lines a site's options are not enumerated.
const OPTION_MAX_LINES: usize = 10;

/// Budget resolution of the option knapsack.
const KNAPSACK_STEPS: i64 = 2000;

/// Fractional relaxation of spending `budget` across sites.
///
/// A site still to be paid for is one item worth its top gain, priced at its
/// entry cost plus its cheapest line. Otherwise each line is an item worth
/// what it adds alone, and the site as a whole adds at most its top gain.
/// Items are taken by value per cost, highest first, and an item cut short
/// by its site's remaining room is paid for pro rata.
fn fractional_gain(sites: &[SiteGains], budget: i64) -> i64 {
    let mut items: Vec<(i64, i64, usize)> = Vec::new();
    let mut room: Vec<i64> = Vec::with_capacity(sites.len());
    for (g, site) in sites.iter().enumerate() {
        let top = site.top();
        room.push(top);
        if top <= 0 {
            continue;
        }
        if site.entry_cost > 0 {
            let cheapest = site.lines.iter().map(|l| l.1).min().unwrap_or(0);
            items.push((top, site.entry_cost + cheapest, g));
        } else {
            for (cap, cost) in &site.lines {
                let value = site.gain(std::iter::once(&cap[..]));
                if value > 0 {
                    items.push((value, *cost, g));
                }
            }
        }
    }
    items.sort_by(|a, b| by_ratio_desc(a.0, a.1, b.0, b.1));
    let mut budget = i128::from(budget);
    let mut gained = 0i64;
    for (value, cost, group) in items {
        let take = value.min(room[group]);
        if take <= 0 {
            continue;
        }
        let cost = i128::from(cost) * i128::from(take) / i128::from(value);
        let take = if cost <= budget {
            budget -= cost;
            take
        } else {
            let partial = (i128::from(take) * budget / cost) as i64;
            budget = 0;
            partial
        };
        room[group] -= take;
        gained += take;
    }
    gained
}

/// Best total gain picking one line subset per site within `budget`, or
/// `None` when some site has too many lines to enumerate.
///
/// Costs are floored to a unit of `budget / KNAPSACK_STEPS`, which only
/// enlarges the feasible set, so the result never undercuts the exact value.
fn exact_gain(sites: &[SiteGains], budget: i64) -> Option<i64> {
    let unit = (budget / KNAPSACK_STEPS).max(1);
    let steps = (budget / unit) as usize;
    let mut best = vec![0i64; steps + 1];
    for site in sites {
        let options = site.options()?;
        let scaled: Vec<(usize, i64)> = options[1..].iter().map(|&(c, v)| ((c / unit) as usize, v)).collect();
        for b in (0..=steps).rev() {
            let mut top = best[b];
            for &(c, v) in scaled.iter().take_while(|&&(c, _)| c <= b) {
                top = top.max(best[b - c] + v);
            }
            best[b] = top;
        }
    }
    Some(best[steps])
}

struct Search<'a> {
    instance: &'a FineInstance,
    order: Vec<Var>,
    partial: PartialDecision,
    committed: Money,
    /// Variables fixed by propagation, undone on backtrack.
    trail: Vec<Var>,
    /// `min(capacity, demand)` per line and period, used by the budget bound.
    line_value: Vec<Vec<Vec<i64>>>,
    total_demand: i64,
    incumbent: i64,
    best: BuildDecision,
    origin: IncumbentOrigin,
    stats: SearchStats,
}

impl<'a> Search<'a> {
    fn new(instance: &'a FineInstance) -> Self {
        let line_value = instance
            .lines
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&instance.loads)
                    .map(|(line, load)| {
                        load.demand_by_period.iter().map(|d| d.hundredths().min(line.capacity.hundredths())).collect()
                    })
                    .collect()
            })
            .collect();
        Search {
            instance,
            order: branch_order(instance),
            partial: PartialDecision::undecided(instance),
            committed: Money::ZERO,
            trail: Vec::new(),
            line_value,
            total_demand: instance.total_demand().hundredths(),
            incumbent: 0,
            best: BuildDecision::nothing(instance),
            origin: IncumbentOrigin::Empty,
            stats: SearchStats::default(),
        }
    }

    fn cost_of(&self, var: Var) -> Money {
        match var {
            Var::Site(i) => self.instance.sites[i].build_cost,
            Var::Line(i, j) => self.instance.lines[i][j].build_cost,
        }
    }

    fn value_of(&self, var: Var) -> Option<bool> {
        match var {
            Var::Site(i) => self.partial.sites[i],
            Var::Line(i, j) => self.partial.lines[i][j],
        }
    }

    fn set(&mut self, var: Var, value: Option<bool>) {
        match var {
            Var::Site(i) => self.partial.sites[i] = value,
            Var::Line(i, j) => self.partial.lines[i][j] = value,
        }
    }

    fn remaining(&self) -> Money {
        self.instance.budget - self.committed
    }

    /// Closes every open variable that can no longer be afforded, and the
    /// lines of closed sites. Returns the trail length to restore to.
    fn propagate(&mut self) -> usize {
        let mark = self.trail.len();
        let remaining = self.remaining();
        for idx in 0..self.order.len() {
            let var = self.order[idx];
            if self.value_of(var).is_some() {
                continue;
            }
            let site_closed = matches!(var, Var::Line(i, _) if self.partial.sites[i] == Some(false));
            if site_closed || self.cost_of(var) > remaining {
                self.set(var, Some(false));
                self.trail.push(var);
            }
        }
        mark
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let var = self.trail.pop().expect("trail above mark");
            self.set(var, None);
        }
    }

    /// Flow the built lines can carry if every load took whatever reached
    /// it, and what each site could add on top.
    ///
    /// Each line is worth at most the smaller of its capacity and its load's
    /// demand, and a site passes on no more than its supply. Lines of a closed
    /// site are dropped.
    fn reach_gains(&self) -> (i64, Vec<SiteGains>) {
        let inst = self.instance;
        let periods = inst.num_periods;
        let mut fixed = 0i64;
        let mut sites = Vec::new();
        for (i, site) in inst.sites.iter().enumerate() {
            let state = self.partial.sites[i];
            if state == Some(false) {
                continue;
            }
            let lines = &self.partial.lines[i];
            let room: Vec<i64> = (0..periods)
                .map(|t| {
                    let cap = site.capacity_by_period[t].hundredths();
                    let base: i64 =
                        (0..inst.num_loads()).filter(|&j| lines[j] == Some(true)).map(|j| self.line_value[i][j][t]).sum();
                    fixed += cap.min(base);
                    (cap - base).max(0)
                })
                .collect();
            let open = (0..inst.num_loads()).filter(|&j| lines[j].is_none());
            sites.push(SiteGains {
                room,
                lines: open.map(|j| (self.line_value[i][j].clone(), inst.lines[i][j].build_cost.hundredths())).collect(),
                entry_cost: if state == Some(true) { 0 } else { site.build_cost.hundredths() },
            });
        }
        (fixed, sites)
    }

    /// Flow of the network of everything already built, and what each site
    /// could add across a minimum cut of it.
    ///
    /// Against a fixed cut, a new line adds capacity only when it runs from a
    /// source-side site to a sink-side load. A source-side site adds at most
    /// its supply minus its lines already crossing the cut, since moving it to
    /// the sink side is another valid cut. Sink-side sites gain nothing. An
    /// unbuilt site adds at most its supply.
    fn cut_gains(&self) -> (i64, Vec<SiteGains>) {
        let inst = self.instance;
        let (n, m, periods) = (inst.num_sites(), inst.num_loads(), inst.num_periods);
        let site_built: Vec<bool> = self.partial.sites.iter().map(|x| *x == Some(true)).collect();
        let line_built: Vec<Vec<bool>> =
            self.partial.lines.iter().map(|row| row.iter().map(|y| *y == Some(true)).collect()).collect();
        let mut built_flow = 0i64;
        let mut room = vec![vec![0i64; periods]; n];
        let mut crossing = vec![vec![vec![0i64; periods]; m]; n];
        for t in 0..periods {
            let net = period_network(inst, &site_built, &line_built, t);
            let flow = max_flow(&net);
            built_flow += flow.total_flow;
            let sink_side = |j: usize| !flow.source_side[net.load_node(j)];
            for i in 0..n {
                let state = self.partial.sites[i];
                if state == Some(false) || (state == Some(true) && !flow.source_side[net.site_node(i)]) {
                    continue;
                }
                let row = &inst.lines[i];
                room[i][t] = inst.sites[i].capacity_by_period[t].hundredths()
                    - (0..m).filter(|&j| line_built[i][j] && sink_side(j)).map(|j| row[j].capacity.hundredths()).sum::<i64>();
                for j in (0..m).filter(|&j| self.partial.lines[i][j].is_none() && sink_side(j)) {
                    crossing[i][j][t] = row[j].capacity.hundredths();
                }
            }
        }
        let sites = (0..n)
            .filter(|&i| self.partial.sites[i] != Some(false))
            .map(|i| SiteGains {
                lines: (0..m)
                    .filter(|&j| crossing[i][j].iter().any(|&c| c > 0))
                    .map(|j| (crossing[i][j].clone(), inst.lines[i][j].build_cost.hundredths()))
                    .collect(),
                room: std::mem::take(&mut room[i]),
                entry_cost: if self.partial.sites[i] == Some(true) { 0 } else { inst.sites[i].build_cost.hundredths() },
            })
            .collect();
        (built_flow, sites)
    }

    /// Budget-aware bound on the reach gains alone.
    fn budget_bound(&self) -> i64 {
        let (fixed, sites) = self.reach_gains();
        let remaining = self.remaining().hundredths();
        let gain = fractional_gain(&sites, remaining);
        (fixed + exact_gain(&sites, remaining).map_or(gain, |exact| exact.min(gain))).min(self.total_demand)
    }

    fn warm_start(&mut self) {
        let mut decision = BuildDecision::nothing(self.instance);
        let mut spent = Money::ZERO;
        for &var in &self.order {
            let cost = self.cost_of(var);
            if spent + cost > self.instance.budget {
                continue;
            }
            match var {
                Var::Site(i) => decision.sites[i] = true,
                Var::Line(i, j) if decision.sites[i] => decision.lines[i][j] = true,
                Var::Line(..) => continue,
            }
            spent += cost;
        }
        let value = relaxation_bound(self.instance, &PartialDecision::from_decision(&decision), spent);
        if value > self.incumbent {
            self.incumbent = value;
            self.best = decision;
            self.origin = IncumbentOrigin::WarmStart;
        }
    }

    /// Upper bound for the current node, trying cheap bounds before dear
    /// ones and stopping as soon as one prunes.
    fn bound(&mut self) -> i64 {
        let remaining = self.remaining().hundredths();
        let (fixed, sites) = self.reach_gains();
        let mut bound = (fixed + fractional_gain(&sites, remaining)).min(self.total_demand);
        if bound <= self.incumbent {
            return bound;
        }
        if let Some(gain) = exact_gain(&sites, remaining) {
            bound = bound.min(fixed + gain);
            if bound <= self.incumbent {
                return bound;
            }
        }

        self.stats.flow_bounds += 1;
        let (built_flow, sites) = self.cut_gains();
        // What is built so far is itself a feasible plan.
        if built_flow > self.incumbent {
            self.incumbent = built_flow;
            self.best = self.current_decision();
            self.origin = IncumbentOrigin::Search;
        }
        let gain = exact_gain(&sites, remaining).unwrap_or_else(|| fractional_gain(&sites, remaining));
        bound = bound.min(built_flow + gain);
        if bound <= self.incumbent {
            return bound;
        }
        bound.min(relaxation_bound(self.instance, &self.partial, self.committed))
    }

    fn dfs(&mut self, mut pos: usize) {
        while pos < self.order.len() && self.value_of(self.order[pos]).is_some() {
            pos += 1;
        }
        self.stats.nodes_explored += 1;
        let bound = self.bound();
        if pos == self.order.len() {
            if bound > self.incumbent {
                self.incumbent = bound;
                self.best = self.current_decision();
                self.origin = IncumbentOrigin::Search;
            }
            return;
        }
        if bound <= self.incumbent {
            self.stats.nodes_pruned += 1;
            return;
        }

        let var = self.order[pos];
        let cost = self.cost_of(var);
        // Propagation has already closed anything unaffordable.
        debug_assert!(cost <= self.remaining());
        self.set(var, Some(true));
        self.committed += cost;
        let mark = self.propagate();
        self.dfs(pos + 1);
        self.undo(mark);
        self.committed = self.committed - cost;

        self.set(var, Some(false));
        let mark = self.propagate();
        self.dfs(pos + 1);
        self.undo(mark);
        self.set(var, None);
    }

    fn current_decision(&self) -> BuildDecision {
        BuildDecision {
            sites: self.partial.sites.iter().map(|x| x == &Some(true)).collect(),
            lines: self.partial.lines.iter().map(|row| row.iter().map(|y| y == &Some(true)).collect()).collect(),
        }
    }
}

/// Optimal build decision by branch-and-bound.
pub fn solve(instance: &FineInstance) -> Result<FineSolution> {
    instance.validate()?;
    let mut search = Search::new(instance);
    search.warm_start();
    let mark = search.propagate();
    let root_bound = search.budget_bound().min(relaxation_bound(instance, &search.partial, Money::ZERO));
    search.dfs(0);
    search.undo(mark);
    let Search { best, origin, stats, .. } = search;
    summarize(instance, best, root_bound, origin, stats)
}

/// Optimal build decision by enumerating every feasible decision.
///
/// Lines of unbuilt sites are never enumerated and branches that exceed the
/// budget are cut, but no bound is used. Limited to
/// [`BRUTE_FORCE_MAX_SITES`] sites and [`BRUTE_FORCE_MAX_LOADS`] loads.
pub fn brute_force_solve(instance: &FineInstance) -> Result<FineSolution> {
    instance.validate()?;
    if instance.num_sites() > BRUTE_FORCE_MAX_SITES || instance.num_loads() > BRUTE_FORCE_MAX_LOADS {
        return Err(Error::TooLarge(format!(
            "brute force handles at most {BRUTE_FORCE_MAX_SITES} sites and {BRUTE_FORCE_MAX_LOADS} loads, got {} and {}",
            instance.num_sites(),
            instance.num_loads()
        )));
    }

    struct Enumerator<'a> {
        instance: &'a FineInstance,
        vars: Vec<Var>,
        decision: BuildDecision,
        best: Option<(i64, BuildDecision)>,
        leaves: u64,
    }

    impl Enumerator<'_> {
        fn walk(&mut self, pos: usize, spent: Money) {
            if pos == self.vars.len() {
                self.leaves += 1;
                let value: i64 = evaluate(self.instance, &self.decision)
                    .expect("enumerated decisions satisfy coupling")
                    .iter()
                    .map(|f| f.total_flow)
                    .sum();
                if self.best.as_ref().is_none_or(|(b, _)| value > *b) {
                    self.best = Some((value, self.decision.clone()));
                }
                return;
            }
            let var = self.vars[pos];
            self.walk(pos + 1, spent);
            let (cost, allowed) = match var {
                Var::Site(i) => (self.instance.sites[i].build_cost, true),
                Var::Line(i, j) => (self.instance.lines[i][j].build_cost, self.decision.sites[i]),
            };
            if allowed && spent + cost <= self.instance.budget {
                self.flip(var, true);
                self.walk(pos + 1, spent + cost);
                self.flip(var, false);
            }
        }

        fn flip(&mut self, var: Var, value: bool) {
            match var {
                Var::Site(i) => self.decision.sites[i] = value,
                Var::Line(i, j) => self.decision.lines[i][j] = value,
            }
        }
    }

    // Each site is followed by its own lines so coupling is known when a line
    // is reached.
    let vars = (0..instance.num_sites())
        .flat_map(|i| std::iter::once(Var::Site(i)).chain((0..instance.num_loads()).map(move |j| Var::Line(i, j))))
        .collect();
    let mut e = Enumerator { instance, vars, decision: BuildDecision::nothing(instance), best: None, leaves: 0 };
    e.walk(0, Money::ZERO);
    let (value, decision) = e.best.expect("the empty decision is always feasible");
    let stats = SearchStats { nodes_explored: e.leaves, ..SearchStats::default() };
    summarize(instance, decision, value, IncumbentOrigin::Enumeration, stats)
}
