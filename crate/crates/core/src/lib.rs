//! Renewable-energy site selection.
//!
//! Two models are provided. The coarse-grained model picks at most `B`
//! candidate sites to cover unit demand points within a service radius,
//! scored by one of three coverage utilities ([`metrics`]) and optimized by
//! greedy or exhaustive search ([`coarse`]). The fine-grained model chooses
//! sites and transmission lines under a monetary budget to maximize the
//! deliverable max flow over all periods ([`network`], [`fine`]).
//! [`datagen`] produces seeded synthetic instances and parameter sweeps.

pub mod coarse;
pub mod coverage;
pub mod datagen;
pub mod error;
pub mod fine;
pub mod metrics;
pub mod network;
pub mod units;

pub use coarse::{
    exhaustive_select, find_submodularity_violation, greedy_select, CoarseSolution, Method, SubmodularityWitness,
};
pub use coverage::{CandidateSite, CoarseInstance, DemandPoint, Point2D};
pub use error::{Error, Result};
pub use fine::{brute_force_solve, relaxation_bound, solve, FineSolution, PartialDecision, SearchStats};
pub use metrics::{Metric, MetricValue};
pub use network::{build_network, max_flow, BuildDecision, FineInstance, FlowNetwork, FlowResult, Line, Load, Site};
pub use units::{Money, Power};
