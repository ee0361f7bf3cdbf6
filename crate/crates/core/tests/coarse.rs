mod common;

use std::collections::BTreeSet;

use common::*;
use num::rational::BigRational;
use num::{BigInt, Zero};
use proptest::prelude::*;
use siteflow::coarse::DEFAULT_VIOLATION_MAX_SITES;
use siteflow::metrics::evaluate;
use siteflow::{
    exhaustive_select, find_submodularity_violation, greedy_select, CandidateSite, CoarseInstance, DemandPoint, Error,
    Metric, Point2D,
};

const CAP: u128 = 1_000_000;

fn sel(ids: &[usize]) -> BTreeSet<usize> {
    ids.iter().copied().collect()
}

/// A rational just above 1 - 1/e, so checks against it are never looser than
/// the true bound.
fn greedy_ratio() -> BigRational {
    BigRational::new(BigInt::from(632_120_558_828_558i64), BigInt::from(1_000_000_000_000_000i64))
}

#[test]
fn coverage_examples() {
    let inst = CoarseInstance::new(
        vec![CandidateSite { id: 0, location: Point2D::new(0.0, 0.0) }],
        vec![
            DemandPoint { id: 0, location: Point2D::new(0.0, 0.5), demand_by_subinterval: vec![1] },
            DemandPoint { id: 1, location: Point2D::new(0.0, 2.0), demand_by_subinterval: vec![1] },
            DemandPoint { id: 2, location: Point2D::new(1.0, 0.0), demand_by_subinterval: vec![1] },
        ],
        1.0,
        1,
        1,
    )
    .unwrap();
    assert_eq!(inst.coverage_set(&inst.sites[0]), sel(&[0, 2]));
    assert!(inst.service_area_union(&sel(&[])).unwrap().is_empty());
    assert!(inst.service_area_union(&sel(&[1])).is_err());
}

#[test]
fn four_on_a_line_region_counts() {
    let inst = four_on_a_line(4);
    let count = |ids: &[usize], t: usize| -> u64 {
        let covered = inst.service_area_union(&sel(ids)).unwrap();
        inst.demand_points.iter().filter(|p| covered.contains(&p.id)).map(|p| u64::from(p.demand_by_subinterval[t])).sum()
    };
    assert_eq!(inst.total_demand(), vec![14, 12]);
    assert_eq!([count(&[0, 1], 0), count(&[0, 1, 2], 0), count(&[0, 1, 3], 0), count(&[0, 1, 2, 3], 0)], [1, 3, 13, 14]);
    assert_eq!([count(&[0, 1], 1), count(&[0, 1, 2], 1), count(&[0, 1, 3], 1), count(&[0, 1, 2, 3], 1)], [2, 6, 9, 12]);
    // Site 2 alone covers its own region and the one it shares with site 3.
    assert_eq!(count(&[2], 0), 2);
}

#[test]
fn three_location_metric_table() {
    let inst = three_location(1);
    let expected = [
        (Metric::Iu, [(82, 110), (74, 110), (60, 110)]),
        (Metric::Csiu, [(10, 10), (11, 10), (105, 100)]),
        (Metric::Msiu, [(2, 10), (4, 10), (5, 10)]),
    ];
    for (metric, values) in expected {
        for (site, (num, den)) in values.into_iter().enumerate() {
            let v = evaluate(metric, &sel(&[site]), &inst).unwrap();
            assert!(v.equals_fraction(num, den), "{metric} site {site}: {}", v.value);
        }
    }
}

#[test]
fn three_location_selections() {
    let inst = three_location(1);
    for (metric, site) in [(Metric::Iu, 0), (Metric::Csiu, 1), (Metric::Msiu, 2)] {
        let best = exhaustive_select(&inst, metric, CAP).unwrap();
        assert_eq!(best.selected_sites, sel(&[site]), "{metric}");
        if metric != Metric::Msiu {
            assert_eq!(greedy_select(&inst, metric).unwrap().selected_sites, sel(&[site]), "{metric}");
        }
    }
    let csiu = greedy_select(&inst, Metric::Csiu).unwrap();
    assert!(csiu.objective.equals_fraction(11, 10));
}

#[test]
fn msiu_witness_on_four_sites() {
    let inst = four_on_a_line(4);
    let w = find_submodularity_violation(&inst, Metric::Msiu, DEFAULT_VIOLATION_MAX_SITES).unwrap().unwrap();
    assert_eq!(w.set_a, sel(&[0, 1]));
    assert_eq!(w.set_b, sel(&[0, 1, 3]));
    assert_eq!(w.element_z, 2);
    assert_eq!(w.gain_a, ratio(3, 14) - ratio(1, 14));
    assert_eq!(w.gain_b, one() - ratio(3, 4));
    assert!(w.gain_a < w.gain_b);

    let v = evaluate(Metric::Msiu, &sel(&[0, 1]), &inst).unwrap();
    assert!(v.equals_fraction(1, 14));
    let best = exhaustive_select(&inst, Metric::Msiu, CAP).unwrap();
    assert_eq!(best.selected_sites, sel(&[0, 1, 2, 3]));
    assert!(best.objective.equals_fraction(1, 1));
}

#[test]
fn csiu_has_no_witness_on_fixtures() {
    for inst in [three_location(1), four_on_a_line(4)] {
        assert_eq!(find_submodularity_violation(&inst, Metric::Csiu, DEFAULT_VIOLATION_MAX_SITES).unwrap(), None);
    }
}

#[test]
fn budget_edge_cases() {
    let empty = greedy_select(&three_location(0), Metric::Csiu).unwrap();
    assert!(empty.selected_sites.is_empty());
    assert!(empty.objective.value.is_zero());
    let all = three_location(3);
    for metric in [Metric::Iu, Metric::Csiu] {
        let g = greedy_select(&all, metric).unwrap();
        assert_eq!(g.objective, evaluate(metric, &sel(&[0, 1, 2]), &all).unwrap());
    }
}

#[test]
fn msiu_greedy_is_rejected() {
    assert!(matches!(greedy_select(&three_location(1), Metric::Msiu), Err(Error::NoApproximationGuarantee { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metrics_match_integer_oracle(case in grid_case(6, 20, 4), mask in 0usize..64) {
        let inst = case.instance(1);
        let selection: BTreeSet<usize> = subset(mask).into_iter().filter(|&s| s < case.sites.len()).collect();
        let (covered, total) = oracle_counts(&case.sites, &case.points, case.radius, case.r, &selection);
        for metric in Metric::ALL {
            match (oracle_metric(metric, &covered, &total), evaluate(metric, &selection, &inst)) {
                (Some(expected), Ok(v)) => prop_assert_eq!(v.value, expected),
                (None, Err(_)) => {}
                (expected, got) => prop_assert!(false, "{metric}: oracle {expected:?}, library {got:?}"),
            }
        }
    }

    #[test]
    fn coverage_is_monotone_and_per_site(case in grid_case(6, 20, 2), a in 0usize..64, extra in 0usize..64) {
        let inst = case.instance(1);
        let m = case.sites.len();
        let keep = |s: BTreeSet<usize>| s.into_iter().filter(|&i| i < m).collect::<BTreeSet<_>>();
        let small = keep(subset(a));
        let large = keep(subset(a | extra));
        let ua = inst.service_area_union(&small).unwrap();
        let ub = inst.service_area_union(&large).unwrap();
        prop_assert!(ua.is_subset(&ub));
        for site in &inst.sites {
            prop_assert_eq!(inst.coverage_set(site), inst.service_area_union(&sel(&[site.id])).unwrap());
        }
        for metric in Metric::ALL {
            if let (Ok(va), Ok(vb)) = (evaluate(metric, &small, &inst), evaluate(metric, &large, &inst)) {
                prop_assert!(va.value <= vb.value, "{} not monotone", metric);
            }
        }
    }

    #[test]
    fn coverage_is_translation_invariant(case in grid_case(5, 15, 2), dx in -50i32..50, dy in -50i32..50) {
        let inst = case.instance(1);
        let moved = GridCase {
            sites: case.sites.iter().map(|&(x, y)| (x + dx, y + dy)).collect(),
            points: case.points.iter().map(|(x, y, d)| (x + dx, y + dy, d.clone())).collect(),
            ..case.clone()
        }
        .instance(1);
        for (a, b) in inst.sites.iter().zip(&moved.sites) {
            prop_assert_eq!(inst.coverage_set(a), moved.coverage_set(b));
        }
    }

    #[test]
    fn single_subinterval_metrics_coincide(case in grid_case(5, 15, 1), mask in 0usize..32) {
        let inst = case.instance(1);
        let selection: BTreeSet<usize> = subset(mask).into_iter().filter(|&s| s < case.sites.len()).collect();
        let values: Vec<_> = Metric::ALL.iter().map(|&m| evaluate(m, &selection, &inst).map(|v| v.value)).collect();
        if let Ok(iu) = &values[0] {
            prop_assert_eq!(values[1].as_ref().unwrap(), iu);
            prop_assert_eq!(values[2].as_ref().unwrap(), iu);
        }
    }

    #[test]
    fn csiu_is_submodular_by_enumeration(case in grid_case(5, 15, 3)) {
        let m = case.sites.len();
        let value = |mask: usize| {
            let (c, t) = oracle_counts(&case.sites, &case.points, case.radius, case.r, &subset(mask));
            oracle_metric(Metric::Csiu, &c, &t).unwrap()
        };
        let values: Vec<BigRational> = (0..1usize << m).map(value).collect();
        for a in 0..1usize << m {
            for b in 0..1usize << m {
                if a & !b != 0 {
                    continue;
                }
                for z in (0..m).filter(|z| b >> z & 1 == 0) {
                    let gain_a = &values[a | 1 << z] - &values[a];
                    let gain_b = &values[b | 1 << z] - &values[b];
                    prop_assert!(gain_a >= gain_b);
                }
            }
        }
        prop_assert_eq!(find_submodularity_violation(&case.instance(1), Metric::Csiu, 8).unwrap(), None);
    }

    #[test]
    fn exhaustive_matches_enumeration_and_bounds_greedy(case in grid_case(7, 20, 3), budget in 0usize..4) {
        let m = case.sites.len();
        let budget = budget.min(m);
        let inst = case.instance(budget);
        for metric in [Metric::Iu, Metric::Csiu] {
            let mut best: Option<BigRational> = None;
            for mask in (0..1usize << m).filter(|mask| mask.count_ones() as usize <= budget) {
                let (c, t) = oracle_counts(&case.sites, &case.points, case.radius, case.r, &subset(mask));
                if let Some(v) = oracle_metric(metric, &c, &t) {
                    best = Some(best.map_or(v.clone(), |b| b.max(v)));
                }
            }
            let exhaustive = exhaustive_select(&inst, metric, CAP);
            let greedy = greedy_select(&inst, metric);
            match best {
                None => prop_assert!(exhaustive.is_err() && greedy.is_err()),
                Some(best) => {
                    let exhaustive = exhaustive.unwrap();
                    let greedy = greedy.unwrap();
                    prop_assert_eq!(&exhaustive.objective.value, &best);
                    prop_assert!(exhaustive.selected_sites.len() <= budget);
                    prop_assert!(greedy.selected_sites.len() <= budget);
                    prop_assert!(greedy.objective.value >= greedy_ratio() * &best);
                    prop_assert_eq!(greedy, greedy_select(&inst, metric).unwrap());
                }
            }
        }
    }
}
