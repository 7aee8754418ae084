//! Thread-parallel drivers over the core engines.
//!
//! Work is split into independent pieces whose results are combined in a
//! fixed order, so every output is identical for any number of threads.

use std::collections::{BTreeMap, BTreeSet};

use heavymp_core::moments::{path_weight, MomentTable, PathCensus};
use heavymp_core::paths::{CanonicalPaths, Path};
use heavymp_core::simulation::{simulate_replicate, SimulationConfig, SpectralSample};
use heavymp_core::{Limits, Result};
use rayon::prelude::*;

/// Length of the prefixes the path stream is split on.
const PREFIX_LEN: usize = 5;

/// [`PathCensus::build`] with the stream split by canonical prefix.
pub fn census(k: usize, limits: &Limits) -> Result<PathCensus> {
    limits.check(k)?;
    let prefixes: Vec<Path> =
        CanonicalPaths::with_prefix(k.min(PREFIX_LEN), None, &Path::empty())?.collect();
    let parts: Vec<PathCensus> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut c = PathCensus::new(k);
            c.extend(CanonicalPaths::with_prefix(k, None, prefix)?);
            Ok(c)
        })
        .collect::<Result<_>>()?;
    let mut total = PathCensus::new(k);
    for part in parts {
        total.merge(part)?;
    }
    total.validate()
}

/// [`MomentTable::compute`] with parallel censuses and path weights.
pub fn moment_table(alpha: f64, gamma: f64, k_max: usize, limits: &Limits) -> Result<MomentTable> {
    MomentTable::validate_args(alpha, gamma, k_max, limits)?;
    let censuses = (4..=k_max)
        .map(|k| census(k, limits))
        .collect::<Result<Vec<_>>>()?;
    let distinct: BTreeSet<Path> = censuses.iter().flat_map(|c| c.distinct_reduced()).collect();
    let distinct: Vec<Path> = distinct.into_iter().collect();
    let values: Vec<f64> = distinct
        .par_iter()
        .map(|p| path_weight(p, alpha))
        .collect::<Result<_>>()?;
    let weights: BTreeMap<Path, f64> = distinct.into_iter().zip(values).collect();
    MomentTable::assemble(alpha, gamma, k_max, &censuses, &weights)
}

/// Replicates `0..count`, in index order.
pub fn replicates(config: &SimulationConfig, count: usize) -> Result<Vec<SpectralSample>> {
    config.validate()?;
    (0..count as u64)
        .into_par_iter()
        .map(|j| simulate_replicate(config, j))
        .collect()
}
