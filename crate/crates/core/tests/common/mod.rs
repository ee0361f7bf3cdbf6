//! Instance builders and brute-force oracles shared by the integration tests.
//!
//! The oracles deliberately avoid the library's own machinery: coverage uses
//! squared integer distances, metrics are rebuilt from those counts, and max
//! flow is checked against an enumeration of every s-t cut.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num::rational::BigRational;
use num::{BigInt, One, Zero};
use proptest::prelude::*;
use siteflow::{
    CandidateSite, CoarseInstance, DemandPoint, FineInstance, FlowNetwork, Line, Load, Metric, Money, Point2D, Power,
    Site,
};

pub fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Coarse instance on an integer grid. Each point is `(x, y, demand)`.
pub fn grid_instance(
    sites: &[(i32, i32)],
    points: &[(i32, i32, Vec<u8>)],
    radius: i32,
    r: usize,
    budget: usize,
) -> CoarseInstance {
    CoarseInstance::new(
        sites
            .iter()
            .enumerate()
            .map(|(id, &(x, y))| CandidateSite { id, location: Point2D::new(x.into(), y.into()) })
            .collect(),
        points
            .iter()
            .enumerate()
            .map(|(id, (x, y, d))| DemandPoint {
                id,
                location: Point2D::new((*x).into(), (*y).into()),
                demand_by_subinterval: d.clone(),
            })
            .collect(),
        radius.into(),
        r,
        budget,
    )
    .unwrap()
}

/// Covered demand per sub-interval, from squared integer distances.
pub fn oracle_counts(
    sites: &[(i32, i32)],
    points: &[(i32, i32, Vec<u8>)],
    radius: i32,
    r: usize,
    selection: &BTreeSet<usize>,
) -> (Vec<u64>, Vec<u64>) {
    let mut covered = vec![0u64; r];
    let mut total = vec![0u64; r];
    let r2 = i64::from(radius) * i64::from(radius);
    for (x, y, d) in points {
        let hit = selection.iter().any(|&s| {
            let (sx, sy) = sites[s];
            let (dx, dy) = (i64::from(x - sx), i64::from(y - sy));
            dx * dx + dy * dy <= r2
        });
        for t in 0..r {
            total[t] += u64::from(d[t]);
            if hit {
                covered[t] += u64::from(d[t]);
            }
        }
    }
    (covered, total)
}

/// Metric value from raw counts; `None` where the library reports an error.
pub fn oracle_metric(metric: Metric, covered: &[u64], total: &[u64]) -> Option<BigRational> {
    match metric {
        Metric::Iu => {
            let den: u64 = total.iter().sum();
            (den > 0).then(|| ratio(covered.iter().sum(), den))
        }
        Metric::Csiu => Some(
            covered
                .iter()
                .zip(total)
                .filter(|(_, &t)| t > 0)
                .fold(BigRational::zero(), |acc, (&c, &t)| acc + ratio(c, t)),
        ),
        Metric::Msiu => covered.iter().zip(total).filter(|(_, &t)| t > 0).map(|(&c, &t)| ratio(c, t)).min(),
    }
}

#[derive(Debug, Clone)]
pub struct GridCase {
    pub sites: Vec<(i32, i32)>,
    pub points: Vec<(i32, i32, Vec<u8>)>,
    pub radius: i32,
    pub r: usize,
}

impl GridCase {
    pub fn instance(&self, budget: usize) -> CoarseInstance {
        grid_instance(&self.sites, &self.points, self.radius, self.r, budget)
    }
}

pub fn grid_case(max_sites: usize, max_points: usize, max_r: usize) -> impl Strategy<Value = GridCase> {
    (1..=max_sites, 0..=max_points, 1..=max_r, 1..=6i32).prop_flat_map(|(m, n, r, radius)| {
        (
            prop::collection::vec((0..20i32, 0..20i32), m),
            prop::collection::vec((0..20i32, 0..20i32, prop::collection::vec(0..=1u8, r)), n),
        )
            .prop_map(move |(sites, points)| GridCase { sites, points, radius, r })
    })
}

pub fn subset(mask: usize) -> BTreeSet<usize> {
    (0..usize::BITS as usize).filter(|b| mask >> b & 1 == 1).collect()
}

/// Minimum s-t cut by enumerating which sites and loads sit on the source side.
pub fn min_cut_enumeration(network: &FlowNetwork) -> i64 {
    let inner = network.num_sites + network.num_loads;
    let mut best = i64::MAX;
    for mask in 0u32..(1 << inner) {
        let on_source = |node: usize| match node {
            FlowNetwork::SOURCE => true,
            FlowNetwork::SINK => false,
            v => mask >> (v - 2) & 1 == 1,
        };
        let cut: i64 = network
            .arcs
            .iter()
            .filter(|a| on_source(a.from) && !on_source(a.to))
            .map(|a| a.capacity)
            .sum();
        best = best.min(cut);
    }
    best
}

/// Capacities in hundredths for a random network.
#[derive(Debug, Clone)]
pub struct NetCase {
    pub sites: Vec<i64>,
    pub lines: Vec<Vec<i64>>,
    pub loads: Vec<i64>,
}

impl NetCase {
    pub fn network(&self) -> FlowNetwork {
        FlowNetwork::from_capacities(&self.sites, &self.lines, &self.loads)
    }
}

pub fn net_case(max_inner: usize) -> impl Strategy<Value = NetCase> {
    (1..max_inner, 1..max_inner)
        .prop_filter("n + m bounded", move |(n, m)| n + m <= max_inner)
        .prop_flat_map(|(n, m)| {
            (
                prop::collection::vec(0..500i64, n),
                prop::collection::vec(prop::collection::vec(prop_oneof![Just(0i64), 0..400i64], m), n),
                prop::collection::vec(0..500i64, m),
            )
                .prop_map(|(sites, lines, loads)| NetCase { sites, lines, loads })
        })
}

/// Random fine instance with costs and capacities in whole units.
pub fn fine_case(max_sites: usize, max_loads: usize, max_periods: usize) -> impl Strategy<Value = FineInstance> {
    (1..=max_sites, 1..=max_loads, 1..=max_periods).prop_flat_map(|(n, m, t)| {
        (
            prop::collection::vec((0..60i64, prop::collection::vec(0..80i64, t)), n),
            prop::collection::vec(prop::collection::vec(0..90i64, t), m),
            prop::collection::vec(prop::collection::vec((0..25i64, 0..70i64), m), n),
            0..200i64,
        )
            .prop_map(move |(sites, loads, lines, budget)| fine_instance(&sites, &loads, &lines, budget, t))
    })
}

pub fn fine_instance(
    sites: &[(i64, Vec<i64>)],
    loads: &[Vec<i64>],
    lines: &[Vec<(i64, i64)>],
    budget: i64,
    periods: usize,
) -> FineInstance {
    let instance = FineInstance {
        sites: sites
            .iter()
            .enumerate()
            .map(|(id, (cost, caps))| Site {
                id,
                build_cost: Money::from_units(*cost),
                capacity_by_period: caps.iter().map(|&c| Power::from_units(c)).collect(),
            })
            .collect(),
        loads: loads
            .iter()
            .enumerate()
            .map(|(id, d)| Load { id, demand_by_period: d.iter().map(|&v| Power::from_units(v)).collect() })
            .collect(),
        lines: lines
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(cost, cap)| Line { build_cost: Money::from_units(cost), capacity: Power::from_units(cap) })
                    .collect()
            })
            .collect(),
        budget: Money::from_units(budget),
        num_periods: periods,
    };
    instance.validate().unwrap();
    instance
}

pub fn one() -> BigRational {
    BigRational::one()
}

fn build(sites: &[(f64, f64)], groups: &[(usize, f64, f64, f64, [u8; 2])], radius: f64, budget: usize) -> CoarseInstance {
    let mut points = Vec::new();
    for &(count, x, y, dy, demand) in groups {
        for k in 0..count {
            points.push(DemandPoint {
                id: points.len(),
                location: Point2D::new(x, y + dy * k as f64),
                demand_by_subinterval: demand.to_vec(),
            });
        }
    }
    let sites = sites.iter().enumerate().map(|(id, &(x, y))| CandidateSite { id, location: Point2D::new(x, y) }).collect();
    CoarseInstance::new(sites, points, radius, 2, budget).unwrap()
}

const T1: [u8; 2] = [1, 0];
const T2: [u8; 2] = [0, 1];

/// Three sites around a point they all cover. Site 0 covers 80 of 100 units
/// in the first sub-interval and 2 of 10 in the second; site 1 covers 70 and
/// 4; site 2 covers 55 and 5.
pub fn three_location(budget: usize) -> CoarseInstance {
    build(
        &[(0.0, 0.0), (4.0, 0.0), (2.0, 3.0)],
        &[
            (55, 2.0, 1.0, 0.0, T1),
            (25, -2.0, 0.0, 0.0, T1),
            (15, 6.0, 0.0, 0.0, T1),
            (5, 20.0, 20.0, 0.0, T1),
            (2, 2.0, 1.0, 0.0, T2),
            (2, 6.0, 0.0, 0.0, T2),
            (3, 2.0, 5.0, 0.0, T2),
            (3, 20.0, 20.0, 0.0, T2),
        ],
        2.5,
        budget,
    )
}

/// Four sites on a line. The first sub-interval has 14 units: one covered
/// by sites 0 and 1, one only by 2, one by 2 and 3, eleven only by 3. The
/// second has 12: two, three, one and six in the same regions.
pub fn four_on_a_line(budget: usize) -> CoarseInstance {
    build(
        &[(0.0, 0.0), (2.0, 0.0), (10.0, 0.0), (14.0, 0.0)],
        &[
            (1, 1.0, 0.0, 0.0, T1),
            (1, 8.5, 0.0, 0.0, T1),
            (1, 12.0, 0.0, 0.0, T1),
            (11, 15.5, 0.0, 0.1, T1),
            (2, 1.0, 0.0, 0.1, T2),
            (3, 8.5, 0.0, 0.1, T2),
            (1, 12.0, 0.0, 0.0, T2),
            (6, 15.5, 0.0, 0.1, T2),
        ],
        2.5,
        budget,
    )
}
