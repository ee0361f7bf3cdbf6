//! Command implementations behind the `siteflow` binary.
//!
//! Each command returns the text it would print so tests can call it
//! without spawning a process.

pub mod experiment;
pub mod format;
pub mod report;

use std::path::Path;

use anyhow::{bail, Context, Result};
use siteflow::coarse::{exhaustive_select, greedy_select, Method, DEFAULT_ENUMERATION_CAP};
use siteflow::datagen::{coarse_from_fine, generate_instance, GenParams, ScatterParams, GENERATOR_NAME};
use siteflow::{solve, Metric, Money};

use crate::format::{GeneratorMetadata, InstanceFile, Payload};
use crate::report::{CoarseReport, FineReport};

pub const ENUM_CAP_VAR: &str = "SITEFLOW_ENUM_CAP";

/// The exhaustive-search cap, from `SITEFLOW_ENUM_CAP` when set.
pub fn enumeration_cap() -> Result<u128> {
    match std::env::var(ENUM_CAP_VAR) {
        Ok(raw) => raw.trim().parse().with_context(|| format!("{ENUM_CAP_VAR}={raw:?} is not a nonnegative integer")),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_ENUMERATION_CAP),
        Err(e) => Err(e).context(ENUM_CAP_VAR),
    }
}

pub fn solve_coarse(path: &Path, metric: Metric, method: Method, budget: Option<usize>, cap: u128) -> Result<String> {
    if method == Method::Greedy && metric == Metric::Msiu {
        bail!("msiu with greedy has no approximation guarantee; use exhaustive");
    }
    let mut instance = InstanceFile::load(path)?.into_coarse()?;
    if let Some(b) = budget {
        instance.budget = b;
    }
    let solution = match method {
        Method::Greedy => greedy_select(&instance, metric)?,
        Method::Exhaustive => exhaustive_select(&instance, metric, cap)?,
    };
    report::to_json(&CoarseReport::new(&instance, &solution)?)
}

pub fn solve_fine(path: &Path, budget: Option<Money>) -> Result<String> {
    let mut instance = InstanceFile::load(path)?.into_fine()?;
    if let Some(b) = budget {
        instance.budget = b;
    }
    let solution = solve(&instance)?;
    report::to_json(&FineReport::new(&instance, &solution)?)
}

/// Generates a fine instance, or a coarse one derived from it when `scatter`
/// is given.
pub fn generate(params: &GenParams, scatter: Option<&ScatterParams>) -> Result<InstanceFile> {
    let fine = generate_instance(params)?;
    let payload = match scatter {
        Some(s) => Payload::Coarse(coarse_from_fine(&fine, s)?),
        None => Payload::Fine(fine),
    };
    Ok(InstanceFile {
        generator: Some(GeneratorMetadata {
            name: GENERATOR_NAME.into(),
            params: params.clone(),
            scatter: scatter.cloned(),
        }),
        notes: None,
        payload,
    })
}
