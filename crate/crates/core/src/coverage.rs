//! Geometric instances for the coarse-grained model.
//!
//! Each candidate site serves every demand point within the service radius
//! (boundary inclusive, planar Euclidean distance). Demand is 0 or 1 per
//! demand point per sub-interval.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2D { x, y }
    }

    pub fn distance(&self, other: &Point2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemandPoint {
    pub id: usize,
    pub location: Point2D,
    /// One 0/1 entry per sub-interval.
    pub demand_by_subinterval: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSite {
    pub id: usize,
    pub location: Point2D,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoarseInstance {
    pub sites: Vec<CandidateSite>,
    pub demand_points: Vec<DemandPoint>,
    /// Service radius in kilometers.
    pub radius: f64,
    pub num_subintervals: usize,
    /// Maximum number of sites that may be selected.
    pub budget: usize,
}

impl CoarseInstance {
    pub fn new(
        sites: Vec<CandidateSite>,
        demand_points: Vec<DemandPoint>,
        radius: f64,
        num_subintervals: usize,
        budget: usize,
    ) -> Result<Self> {
        let instance = CoarseInstance { sites, demand_points, radius, num_subintervals, budget };
        instance.validate()?;
        Ok(instance)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInstance(msg));
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return bad(format!("service radius must be positive, got {}", self.radius));
        }
        if self.num_subintervals == 0 {
            return bad("at least one sub-interval is required".into());
        }
        if self.budget > self.sites.len() {
            return bad(format!("budget {} exceeds the {} candidate sites", self.budget, self.sites.len()));
        }
        for (idx, site) in self.sites.iter().enumerate() {
            if site.id != idx {
                return bad(format!("site ids must be contiguous from 0; position {idx} has id {}", site.id));
            }
            if !site.location.is_finite() {
                return bad(format!("site {idx} has a non-finite location"));
            }
        }
        for (idx, point) in self.demand_points.iter().enumerate() {
            if point.id != idx {
                return bad(format!("demand point ids must be contiguous from 0; position {idx} has id {}", point.id));
            }
            if !point.location.is_finite() {
                return bad(format!("demand point {idx} has a non-finite location"));
            }
            if point.demand_by_subinterval.len() != self.num_subintervals {
                return bad(format!(
                    "demand point {idx} has {} sub-interval entries, expected {}",
                    point.demand_by_subinterval.len(),
                    self.num_subintervals
                ));
            }
            if point.demand_by_subinterval.iter().any(|&d| d > 1) {
                return bad(format!("demand point {idx} has a demand other than 0 or 1"));
            }
        }
        Ok(())
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    /// Ids of demand points within the service radius of `site`.
    pub fn coverage_set(&self, site: &CandidateSite) -> BTreeSet<usize> {
        self.demand_points
            .iter()
            .filter(|p| covers(&site.location, &p.location, self.radius))
            .map(|p| p.id)
            .collect()
    }

    pub fn service_area_union(&self, selection: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
        self.check_selection(selection)?;
        let mut covered = BTreeSet::new();
        for &id in selection {
            covered.extend(self.coverage_set(&self.sites[id]));
        }
        Ok(covered)
    }

    pub(crate) fn check_selection(&self, selection: &BTreeSet<usize>) -> Result<()> {
        match selection.iter().find(|&&id| id >= self.sites.len()) {
            Some(&id) => Err(Error::UnknownSite { id, num_sites: self.sites.len() }),
            None => Ok(()),
        }
    }

    /// Total demand units in each sub-interval.
    pub fn total_demand(&self) -> Vec<u64> {
        let mut totals = vec![0u64; self.num_subintervals];
        for point in &self.demand_points {
            for (t, &d) in point.demand_by_subinterval.iter().enumerate() {
                totals[t] += u64::from(d);
            }
        }
        totals
    }
}

fn covers(site: &Point2D, point: &Point2D, radius: f64) -> bool {
    site.distance(point) <= radius
}

/// Demand met by a selection, per sub-interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageCounts {
    pub covered: Vec<u64>,
    pub total: Vec<u64>,
}

/// Per-site coverage bitsets used by the solvers, where the same instance is
/// evaluated for many selections.
#[derive(Debug, Clone)]
pub struct CoverageIndex {
    words: usize,
    site_masks: Vec<Vec<u64>>,
    demand_masks: Vec<Vec<u64>>,
    totals: Vec<u64>,
}

impl CoverageIndex {
    pub fn new(instance: &CoarseInstance) -> Self {
        let n = instance.demand_points.len();
        let words = n.div_ceil(64).max(1);
        let site_masks = instance
            .sites
            .iter()
            .map(|site| {
                let mut mask = vec![0u64; words];
                for id in instance.coverage_set(site) {
                    mask[id / 64] |= 1 << (id % 64);
                }
                mask
            })
            .collect();
        let mut demand_masks = vec![vec![0u64; words]; instance.num_subintervals];
        for point in &instance.demand_points {
            for (t, &d) in point.demand_by_subinterval.iter().enumerate() {
                if d == 1 {
                    demand_masks[t][point.id / 64] |= 1 << (point.id % 64);
                }
            }
        }
        CoverageIndex { words, site_masks, demand_masks, totals: instance.total_demand() }
    }

    pub fn num_sites(&self) -> usize {
        self.site_masks.len()
    }

    pub fn empty_mask(&self) -> Vec<u64> {
        vec![0; self.words]
    }

    pub fn union_into(&self, mask: &mut [u64], site: usize) {
        for (w, s) in mask.iter_mut().zip(&self.site_masks[site]) {
            *w |= s;
        }
    }

    pub fn mask_of<'a>(&self, sites: impl IntoIterator<Item = &'a usize>) -> Vec<u64> {
        let mut mask = self.empty_mask();
        for &s in sites {
            self.union_into(&mut mask, s);
        }
        mask
    }

    pub fn counts(&self, covered_mask: &[u64]) -> CoverageCounts {
        let covered = self
            .demand_masks
            .iter()
            .map(|dm| dm.iter().zip(covered_mask).map(|(d, c)| u64::from((d & c).count_ones())).sum())
            .collect();
        CoverageCounts { covered, total: self.totals.clone() }
    }
}
