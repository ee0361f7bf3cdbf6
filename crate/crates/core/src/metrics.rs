//! Benefit metrics for a site selection in the coarse-grained model.
//!
//! All three are ratios of covered demand units to total demand units:
//!
//! * interval utility (IU) pools every sub-interval before dividing,
//! * cumulative sub-interval utility (CSIU) sums the per-sub-interval ratios,
//! * minimum sub-interval utility (MSIU) takes the worst per-sub-interval ratio.
//!
//! Sub-intervals with no demand are skipped by CSIU and MSIU. Values are exact
//! rationals so that ties and submodularity checks are decided without
//! rounding.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::coverage::{CoarseInstance, CoverageCounts, CoverageIndex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Iu,
    Csiu,
    Msiu,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Iu, Metric::Csiu, Metric::Msiu];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Iu => "IU",
            Metric::Csiu => "CSIU",
            Metric::Msiu => "MSIU",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "iu" => Ok(Metric::Iu),
            "csiu" => Ok(Metric::Csiu),
            "msiu" => Ok(Metric::Msiu),
            other => Err(format!("unknown metric `{other}` (expected iu, csiu or msiu)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricValue {
    pub kind: Metric,
    pub value: BigRational,
}

impl MetricValue {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact comparison against `num / den`.
    pub fn equals_fraction(&self, num: i64, den: i64) -> bool {
        self.value == BigRational::new(num.into(), den.into())
    }
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Evaluates `metric` from per-sub-interval covered/total counts.
pub fn metric_from_counts(metric: Metric, counts: &CoverageCounts) -> Result<MetricValue> {
    let per_period = counts
        .covered
        .iter()
        .zip(&counts.total)
        .filter(|(_, &total)| total > 0)
        .map(|(&covered, &total)| ratio(covered, total));
    let value = match metric {
        Metric::Iu => {
            let total: u64 = counts.total.iter().sum();
            if total == 0 {
                return Err(Error::UndefinedRatio);
            }
            ratio(counts.covered.iter().sum(), total)
        }
        Metric::Csiu => per_period.fold(BigRational::zero(), |acc, r| acc + r),
        Metric::Msiu => per_period.min().ok_or(Error::UndefinedRatio)?,
    };
    Ok(MetricValue { kind: metric, value })
}

/// Covered and total demand per sub-interval for `selection`.
pub fn coverage_counts(selection: &BTreeSet<usize>, instance: &CoarseInstance) -> Result<CoverageCounts> {
    let covered_points = instance.service_area_union(selection)?;
    let mut covered = vec![0u64; instance.num_subintervals];
    for id in covered_points {
        for (t, &d) in instance.demand_points[id].demand_by_subinterval.iter().enumerate() {
            covered[t] += u64::from(d);
        }
    }
    Ok(CoverageCounts { covered, total: instance.total_demand() })
}

pub fn evaluate(metric: Metric, selection: &BTreeSet<usize>, instance: &CoarseInstance) -> Result<MetricValue> {
    metric_from_counts(metric, &coverage_counts(selection, instance)?)
}

pub fn interval_utility(selection: &BTreeSet<usize>, instance: &CoarseInstance) -> Result<MetricValue> {
    evaluate(Metric::Iu, selection, instance)
}

pub fn cumulative_subinterval_utility(selection: &BTreeSet<usize>, instance: &CoarseInstance) -> Result<MetricValue> {
    evaluate(Metric::Csiu, selection, instance)
}

pub fn minimum_subinterval_utility(selection: &BTreeSet<usize>, instance: &CoarseInstance) -> Result<MetricValue> {
    evaluate(Metric::Msiu, selection, instance)
}

/// Metric value for a set of sites given as indices into a [`CoverageIndex`].
pub(crate) fn evaluate_indexed(metric: Metric, sites: &[usize], index: &CoverageIndex) -> Result<MetricValue> {
    metric_from_counts(metric, &index.counts(&index.mask_of(sites)))
}
