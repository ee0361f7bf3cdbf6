//! Site selection for the coarse-grained model.
//!
//! IU and CSIU are monotone submodular, so greedy selection is within
//! `1 - 1/e` of optimal for them. MSIU is not submodular; it can only be
//! solved exhaustively here, and [`find_submodularity_violation`] exhibits
//! the failure on concrete instances.

use std::collections::BTreeSet;
use std::fmt;

use num::BigRational;
use serde::Serialize;

use crate::coverage::{CoarseInstance, CoverageIndex};
use crate::error::{Error, Result};
use crate::metrics::{evaluate_indexed, metric_from_counts, Metric, MetricValue};

/// Default limit on the number of subsets [`exhaustive_select`] may visit.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

/// Default limit on the site count for [`find_submodularity_violation`].
pub const DEFAULT_VIOLATION_MAX_SITES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Greedy,
    Exhaustive,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Greedy => "greedy",
            Method::Exhaustive => "exhaustive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoarseSolution {
    pub selected_sites: BTreeSet<usize>,
    pub objective: MetricValue,
    pub method: Method,
}

/// A triple `A ⊆ B`, `z ∉ B` with `f(A ∪ {z}) - f(A) < f(B ∪ {z}) - f(B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmodularityWitness {
    pub set_a: BTreeSet<usize>,
    pub set_b: BTreeSet<usize>,
    pub element_z: usize,
    pub gain_a: BigRational,
    pub gain_b: BigRational,
}

/// Greedy selection of up to `instance.budget` sites.
///
/// Each round adds the site with the largest marginal gain, lowest id first on
/// ties, and stops early once no site adds anything. Only IU and CSIU are
/// accepted.
pub fn greedy_select(instance: &CoarseInstance, metric: Metric) -> Result<CoarseSolution> {
    if metric == Metric::Msiu {
        return Err(Error::NoApproximationGuarantee { metric: metric.name() });
    }
    let index = CoverageIndex::new(instance);
    let mut selected = Vec::new();
    let mut mask = index.empty_mask();
    let mut current = metric_from_counts(metric, &index.counts(&mask))?;

    for _ in 0..instance.budget.min(index.num_sites()) {
        let mut best: Option<(usize, MetricValue, Vec<u64>)> = None;
        for site in (0..index.num_sites()).filter(|s| !selected.contains(s)) {
            let mut candidate = mask.clone();
            index.union_into(&mut candidate, site);
            let value = metric_from_counts(metric, &index.counts(&candidate))?;
            if best.as_ref().is_none_or(|(_, b, _)| value.value > b.value) {
                best = Some((site, value, candidate));
            }
        }
        match best {
            Some((site, value, candidate)) if value.value > current.value => {
                selected.push(site);
                mask = candidate;
                current = value;
            }
            _ => break,
        }
    }

    Ok(CoarseSolution { selected_sites: selected.into_iter().collect(), objective: current, method: Method::Greedy })
}

/// Number of subsets of size at most `k` drawn from `m` elements.
fn subsets_up_to(m: usize, k: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for j in 0..=k.min(m) {
        total = total.saturating_add(binom);
        binom = binom.saturating_mul((m - j) as u128) / (j as u128 + 1);
    }
    total
}

/// Optimal selection of at most `instance.budget` sites by enumeration.
///
/// Subsets are visited in lexicographic order of their sorted ids and only a
/// strictly better value replaces the incumbent, so the lexicographically
/// smallest optimum is returned.
pub fn exhaustive_select(instance: &CoarseInstance, metric: Metric, cap: u128) -> Result<CoarseSolution> {
    let m = instance.num_sites();
    let count = subsets_up_to(m, instance.budget);
    if count > cap {
        return Err(Error::EnumerationCap { count, cap });
    }
    let index = CoverageIndex::new(instance);

    struct Search<'a> {
        index: &'a CoverageIndex,
        metric: Metric,
        budget: usize,
        best: Option<(Vec<usize>, MetricValue)>,
    }

    impl Search<'_> {
        fn visit(&mut self, prefix: &mut Vec<usize>, mask: &[u64]) -> Result<()> {
            let value = metric_from_counts(self.metric, &self.index.counts(mask))?;
            if self.best.as_ref().is_none_or(|(_, b)| value.value > b.value) {
                self.best = Some((prefix.clone(), value));
            }
            if prefix.len() == self.budget {
                return Ok(());
            }
            let start = prefix.last().map_or(0, |&l| l + 1);
            for site in start..self.index.num_sites() {
                let mut next = mask.to_vec();
                self.index.union_into(&mut next, site);
                prefix.push(site);
                self.visit(prefix, &next)?;
                prefix.pop();
            }
            Ok(())
        }
    }

    let mut search = Search { index: &index, metric, budget: instance.budget, best: None };
    search.visit(&mut Vec::new(), &index.empty_mask())?;
    let (sites, objective) = search.best.expect("the empty selection is always visited");
    Ok(CoarseSolution { selected_sites: sites.into_iter().collect(), objective, method: Method::Exhaustive })
}

fn mask_to_set(mask: usize) -> BTreeSet<usize> {
    (0..usize::BITS as usize).filter(|i| mask >> i & 1 == 1).collect()
}

/// Searches every `A ⊆ B`, `z ∉ B` for a violation of the diminishing-returns
/// inequality.
///
/// Subsets are encoded as bitmasks over site ids. The scan order is: `A` by
/// decreasing size, then increasing mask; then `z` ascending; then `B ⊇ A`
/// by increasing mask. The first violation found is returned.
pub fn find_submodularity_violation(
    instance: &CoarseInstance,
    metric: Metric,
    max_sites: usize,
) -> Result<Option<SubmodularityWitness>> {
    let m = instance.num_sites();
    if m > max_sites {
        return Err(Error::TooLarge(format!("{m} sites exceeds the submodularity-scan limit of {max_sites}")));
    }
    let index = CoverageIndex::new(instance);
    let full = (1usize << m) - 1;
    let values = (0..=full)
        .map(|mask| {
            let sites: Vec<usize> = mask_to_set(mask).into_iter().collect();
            evaluate_indexed(metric, &sites, &index).map(|v| v.value)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut bases: Vec<usize> = (0..=full).collect();
    bases.sort_by_key(|&a| (std::cmp::Reverse(a.count_ones()), a));

    for a in bases {
        for z in (0..m).filter(|z| a >> z & 1 == 0) {
            let zbit = 1 << z;
            let gain_a = &values[a | zbit] - &values[a];
            // Supersets of `a` that avoid `z`, in increasing order.
            let free = full & !a & !zbit;
            let mut extra = 0usize;
            loop {
                let b = a | extra;
                let gain_b = &values[b | zbit] - &values[b];
                if gain_a < gain_b {
                    return Ok(Some(SubmodularityWitness {
                        set_a: mask_to_set(a),
                        set_b: mask_to_set(b),
                        element_z: z,
                        gain_a,
                        gain_b,
                    }));
                }
                if extra == free {
                    break;
                }
                extra = (extra.wrapping_sub(free)) & free;
            }
        }
    }
    Ok(None)
}
