use proptest::prelude::*;
use siteflow::datagen::{coarse_from_fine, generate_instance, GenParams, ScatterParams, VarianceVector};
use siteflow::{Money, Power};

fn within<T: PartialOrd + Copy + std::fmt::Debug>(v: T, range: [T; 2]) -> bool {
    range[0] <= v && v <= range[1]
}

#[test]
fn default_shape() {
    let inst = generate_instance(&GenParams::with_seed(42)).unwrap();
    assert_eq!((inst.num_sites(), inst.num_loads(), inst.num_periods), (14, 9, 12));
    let site_cost: i64 = inst.sites.iter().map(|s| s.build_cost.hundredths()).sum();
    assert_eq!(inst.budget, Money::from_hundredths(site_cost / 2));
}

#[test]
fn zero_variance_keeps_capacity_flat() {
    let params = GenParams { variance: VarianceVector::zero(), ..GenParams::with_seed(3) };
    let inst = generate_instance(&params).unwrap();
    for site in &inst.sites {
        assert!(site.capacity_by_period.iter().all(|&c| c == site.capacity_by_period[0]));
    }
    for load in &inst.loads {
        assert!(load.demand_by_period.iter().all(|&d| d == load.demand_by_period[0]));
    }
    for row in &inst.lines {
        assert!(row.iter().all(|l| params.line_capacity_choices.contains(&l.capacity)));
    }
}

#[test]
fn explicit_budget_is_kept() {
    let params = GenParams { budget: Some("123.45".parse().unwrap()), ..GenParams::with_seed(8) };
    assert_eq!(generate_instance(&params).unwrap().budget.to_string(), "123.45");
}

#[test]
fn invalid_params_are_rejected() {
    let p = GenParams { num_periods: 0, ..GenParams::default() };
    assert!(generate_instance(&p).is_err());
    let p = GenParams { line_capacity_choices: vec![], ..GenParams::default() };
    assert!(generate_instance(&p).is_err());
    let p = GenParams { demand_range: [Power::from_units(5), Power::from_units(1)], ..GenParams::default() };
    assert!(generate_instance(&p).is_err());
}

#[test]
fn coarse_instances_follow_the_fine_one() {
    let fine = generate_instance(&GenParams::with_seed(5)).unwrap();
    let scatter = ScatterParams::default();
    let coarse = coarse_from_fine(&fine, &scatter).unwrap();
    assert_eq!(coarse.num_sites(), fine.num_sites());
    assert_eq!(coarse.demand_points.len(), fine.num_loads());
    assert_eq!(coarse.num_subintervals, fine.num_periods);
    for (point, load) in coarse.demand_points.iter().zip(&fine.loads) {
        for (flag, d) in point.demand_by_subinterval.iter().zip(&load.demand_by_period) {
            assert_eq!(*flag == 1, *d >= scatter.demand_threshold);
        }
        assert!(within(point.location.x, [0.0, scatter.side_km]) && within(point.location.y, [0.0, scatter.side_km]));
    }
    assert_eq!(coarse, coarse_from_fine(&fine, &scatter).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn values_stay_in_range(seed in any::<u64>(), n in 1usize..16, m in 1usize..10, t in 1usize..13) {
        let p = GenParams { n_sites: n, m_loads: m, num_periods: t, ..GenParams::with_seed(seed) };
        let inst = generate_instance(&p).unwrap();
        let lo = *p.line_capacity_choices.iter().min().unwrap();
        let hi = *p.line_capacity_choices.iter().max().unwrap();
        for site in &inst.sites {
            prop_assert!(within(site.build_cost, p.site_cost_range));
            for &c in &site.capacity_by_period {
                prop_assert!(within(c, p.site_capacity_range));
            }
        }
        for row in &inst.lines {
            for line in row {
                prop_assert!(within(line.build_cost, p.line_cost_range));
                prop_assert!(within(line.capacity, [lo, hi]));
            }
        }
        for load in &inst.loads {
            for &d in &load.demand_by_period {
                prop_assert!(within(d, p.demand_range));
            }
        }
    }

    #[test]
    fn same_seed_same_instance(seed in any::<u64>()) {
        let p = GenParams { n_sites: 5, m_loads: 4, num_periods: 3, ..GenParams::with_seed(seed) };
        let a = generate_instance(&p).unwrap();
        let b = generate_instance(&p).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let other = generate_instance(&GenParams { seed: seed.wrapping_add(1), ..p }).unwrap();
        prop_assert_ne!(a, other);
    }
}
