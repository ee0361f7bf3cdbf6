//! Fine-grained instances and the supply network built from a build decision.
//!
//! The network has a super source feeding every site, a complete bipartite
//! layer of candidate lines from sites to loads, and every load draining into
//! a super load. Capacities are integral hundredths of a megawatt so the max
//! flow is exact.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{Money, Power};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Site {
    pub id: usize,
    pub build_cost: Money,
    /// Generation available in each period.
    pub capacity_by_period: Vec<Power>,
}

impl Site {
    /// Largest per-period capacity, the site's maximum output.
    pub fn max_capacity(&self) -> Power {
        self.capacity_by_period.iter().copied().max().unwrap_or(Power::ZERO)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Load {
    pub id: usize,
    pub demand_by_period: Vec<Power>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    pub build_cost: Money,
    pub capacity: Power,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FineInstance {
    pub sites: Vec<Site>,
    pub loads: Vec<Load>,
    /// `lines[i][j]` connects site `i` to load `j`.
    pub lines: Vec<Vec<Line>>,
    pub budget: Money,
    pub num_periods: usize,
}

impl FineInstance {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInstance(msg));
        if self.num_periods == 0 {
            return bad("at least one period is required".into());
        }
        if self.budget < Money::ZERO {
            return bad("budget must be nonnegative".into());
        }
        for (i, site) in self.sites.iter().enumerate() {
            if site.id != i {
                return bad(format!("site ids must be contiguous from 0; position {i} has id {}", site.id));
            }
            if site.build_cost < Money::ZERO {
                return bad(format!("site {i} has a negative build cost"));
            }
            if site.capacity_by_period.len() != self.num_periods {
                return bad(format!("site {i} has {} capacities, expected {}", site.capacity_by_period.len(), self.num_periods));
            }
            if site.capacity_by_period.iter().any(|c| *c < Power::ZERO) {
                return bad(format!("site {i} has a negative capacity"));
            }
        }
        for (j, load) in self.loads.iter().enumerate() {
            if load.id != j {
                return bad(format!("load ids must be contiguous from 0; position {j} has id {}", load.id));
            }
            if load.demand_by_period.len() != self.num_periods {
                return bad(format!("load {j} has {} demands, expected {}", load.demand_by_period.len(), self.num_periods));
            }
            if load.demand_by_period.iter().any(|d| *d < Power::ZERO) {
                return bad(format!("load {j} has a negative demand"));
            }
        }
        if self.lines.len() != self.sites.len() {
            return bad(format!("line matrix has {} rows, expected {}", self.lines.len(), self.sites.len()));
        }
        for (i, row) in self.lines.iter().enumerate() {
            if row.len() != self.loads.len() {
                return bad(format!("line row {i} has {} entries, expected {}", row.len(), self.loads.len()));
            }
            if row.iter().any(|l| l.build_cost < Money::ZERO || l.capacity < Power::ZERO) {
                return bad(format!("line row {i} has a negative cost or capacity"));
            }
        }
        Ok(())
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn num_loads(&self) -> usize {
        self.loads.len()
    }

    /// Cost of building every site and every line.
    pub fn total_build_cost(&self) -> Money {
        self.sites.iter().map(|s| s.build_cost).sum::<Money>() + self.lines.iter().flatten().map(|l| l.build_cost).sum()
    }

    pub fn total_demand(&self) -> Power {
        self.loads.iter().flat_map(|l| &l.demand_by_period).sum()
    }
}

/// Which sites and lines are built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BuildDecision {
    pub sites: Vec<bool>,
    /// `lines[i][j]` is true when the line from site `i` to load `j` is built.
    pub lines: Vec<Vec<bool>>,
}

impl BuildDecision {
    pub fn nothing(instance: &FineInstance) -> Self {
        BuildDecision {
            sites: vec![false; instance.num_sites()],
            lines: vec![vec![false; instance.num_loads()]; instance.num_sites()],
        }
    }

    pub fn everything(instance: &FineInstance) -> Self {
        BuildDecision {
            sites: vec![true; instance.num_sites()],
            lines: vec![vec![true; instance.num_loads()]; instance.num_sites()],
        }
    }

    /// Checks shape and that no line is built from an unbuilt site.
    pub fn check(&self, instance: &FineInstance) -> Result<()> {
        if self.sites.len() != instance.num_sites()
            || self.lines.len() != instance.num_sites()
            || self.lines.iter().any(|row| row.len() != instance.num_loads())
        {
            return Err(Error::InvalidDecision("decision shape does not match the instance".into()));
        }
        for (i, row) in self.lines.iter().enumerate() {
            if !self.sites[i] {
                if let Some(j) = row.iter().position(|&y| y) {
                    return Err(Error::InvalidDecision(format!("line {i}->{j} is built but site {i} is not")));
                }
            }
        }
        Ok(())
    }

    pub fn cost(&self, instance: &FineInstance) -> Money {
        let sites: Money = instance.sites.iter().zip(&self.sites).filter(|(_, &x)| x).map(|(s, _)| s.build_cost).sum();
        let lines: Money = instance
            .lines
            .iter()
            .zip(&self.lines)
            .flat_map(|(costs, built)| costs.iter().zip(built))
            .filter(|(_, &y)| y)
            .map(|(l, _)| l.build_cost)
            .sum();
        sites + lines
    }

    pub fn built_sites(&self) -> Vec<usize> {
        self.sites.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i).collect()
    }

    pub fn built_lines(&self) -> Vec<(usize, usize)> {
        self.lines
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().filter(|(_, &y)| y).map(move |(j, _)| (i, j)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcGroup {
    SourceToSite,
    SiteToLoad,
    LoadToSink,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    /// Hundredths of a megawatt.
    pub capacity: i64,
    pub group: ArcGroup,
}

/// Directed network with node 0 the super source and node 1 the super load.
///
/// Sites are nodes `2..2 + n` and loads follow. Arcs are ordered source→site
/// (`n`), then site→load row by row (`n·m`), then load→sink (`m`). Arcs with
/// zero capacity are kept so the layout is fixed by `(n, m)` alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    pub num_sites: usize,
    pub num_loads: usize,
    pub arcs: Vec<Arc>,
}

impl FlowNetwork {
    pub const SOURCE: usize = 0;
    pub const SINK: usize = 1;

    pub fn node_count(&self) -> usize {
        self.num_sites + self.num_loads + 2
    }

    pub fn site_node(&self, i: usize) -> usize {
        2 + i
    }

    pub fn load_node(&self, j: usize) -> usize {
        2 + self.num_sites + j
    }

    pub fn source_arc(&self, i: usize) -> usize {
        i
    }

    pub fn line_arc(&self, i: usize, j: usize) -> usize {
        self.num_sites + i * self.num_loads + j
    }

    pub fn sink_arc(&self, j: usize) -> usize {
        self.num_sites + self.num_sites * self.num_loads + j
    }

    /// The network with every capacity set by the caller.
    pub fn from_capacities(
        site_capacity: &[i64],
        line_capacity: &[Vec<i64>],
        load_demand: &[i64],
    ) -> Self {
        let n = site_capacity.len();
        let m = load_demand.len();
        let mut arcs = Vec::with_capacity(n + m + n * m);
        for (i, &cap) in site_capacity.iter().enumerate() {
            arcs.push(Arc { from: Self::SOURCE, to: 2 + i, capacity: cap, group: ArcGroup::SourceToSite });
        }
        for (i, row) in line_capacity.iter().enumerate() {
            for (j, &cap) in row.iter().enumerate() {
                arcs.push(Arc { from: 2 + i, to: 2 + n + j, capacity: cap, group: ArcGroup::SiteToLoad });
            }
        }
        for (j, &cap) in load_demand.iter().enumerate() {
            arcs.push(Arc { from: 2 + n + j, to: Self::SINK, capacity: cap, group: ArcGroup::LoadToSink });
        }
        FlowNetwork { num_sites: n, num_loads: m, arcs }
    }
}

/// Network for one period under `decision`.
pub fn build_network(instance: &FineInstance, decision: &BuildDecision, period: usize) -> Result<FlowNetwork> {
    if period >= instance.num_periods {
        return Err(Error::InvalidDecision(format!(
            "period {period} out of range (instance has {})",
            instance.num_periods
        )));
    }
    decision.check(instance)?;
    let site_capacity: Vec<i64> = instance
        .sites
        .iter()
        .zip(&decision.sites)
        .map(|(s, &x)| if x { s.capacity_by_period[period].hundredths() } else { 0 })
        .collect();
    let line_capacity: Vec<Vec<i64>> = instance
        .lines
        .iter()
        .zip(&decision.lines)
        .map(|(row, built)| row.iter().zip(built).map(|(l, &y)| if y { l.capacity.hundredths() } else { 0 }).collect())
        .collect();
    let demand: Vec<i64> = instance.loads.iter().map(|l| l.demand_by_period[period].hundredths()).collect();
    Ok(FlowNetwork::from_capacities(&site_capacity, &line_capacity, &demand))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    /// Total flow out of the super source, in hundredths of a megawatt.
    pub total_flow: i64,
    /// Flow on each arc, indexed like [`FlowNetwork::arcs`].
    pub arc_flow: Vec<i64>,
    /// Nodes reachable from the source in the final residual graph; the arcs
    /// leaving this set form a minimum cut.
    pub source_side: Vec<bool>,
}

impl FlowResult {
    pub fn total_power(&self) -> Power {
        Power::from_hundredths(self.total_flow)
    }

    /// Capacity of the cut induced by [`FlowResult::source_side`].
    pub fn cut_capacity(&self, network: &FlowNetwork) -> i64 {
        network
            .arcs
            .iter()
            .filter(|a| self.source_side[a.from] && !self.source_side[a.to])
            .map(|a| a.capacity)
            .sum()
    }
}

struct ResidualEdge {
    to: usize,
    cap: i64,
    rev: usize,
}

/// Dinic's blocking-flow max flow from the super source to the super load.
pub fn max_flow(network: &FlowNetwork) -> FlowResult {
    let nodes = network.node_count();
    let mut graph: Vec<Vec<ResidualEdge>> = (0..nodes).map(|_| Vec::new()).collect();
    let mut handles = Vec::with_capacity(network.arcs.len());
    for arc in &network.arcs {
        let fwd = graph[arc.from].len();
        let back = graph[arc.to].len() + usize::from(arc.from == arc.to);
        graph[arc.from].push(ResidualEdge { to: arc.to, cap: arc.capacity.max(0), rev: back });
        graph[arc.to].push(ResidualEdge { to: arc.from, cap: 0, rev: fwd });
        handles.push((arc.from, fwd));
    }

    let (source, sink) = (FlowNetwork::SOURCE, FlowNetwork::SINK);
    let mut level = vec![usize::MAX; nodes];
    let mut next_edge = vec![0usize; nodes];
    let mut total = 0i64;

    loop {
        level.fill(usize::MAX);
        level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for e in &graph[v] {
                if e.cap > 0 && level[e.to] == usize::MAX {
                    level[e.to] = level[v] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        if level[sink] == usize::MAX {
            break;
        }
        next_edge.fill(0);
        loop {
            let pushed = augment(&mut graph, &level, &mut next_edge, source, sink, i64::MAX);
            if pushed == 0 {
                break;
            }
            total += pushed;
        }
    }

    let arc_flow = network
        .arcs
        .iter()
        .zip(&handles)
        .map(|(arc, &(from, idx))| arc.capacity.max(0) - graph[from][idx].cap)
        .collect();
    let source_side = level.iter().map(|&l| l != usize::MAX).collect();
    FlowResult { total_flow: total, arc_flow, source_side }
}

fn augment(
    graph: &mut [Vec<ResidualEdge>],
    level: &[usize],
    next_edge: &mut [usize],
    v: usize,
    sink: usize,
    limit: i64,
) -> i64 {
    if v == sink {
        return limit;
    }
    while next_edge[v] < graph[v].len() {
        let idx = next_edge[v];
        let (to, cap) = (graph[v][idx].to, graph[v][idx].cap);
        if cap > 0 && level[to] == level[v] + 1 {
            let pushed = augment(graph, level, next_edge, to, sink, limit.min(cap));
            if pushed > 0 {
                graph[v][idx].cap -= pushed;
                let rev = graph[v][idx].rev;
                graph[to][rev].cap += pushed;
                return pushed;
            }
        }
        next_edge[v] += 1;
    }
    0
}
