//! Empirical return-time sets along single orbits and the frequent
//! recurrence evidence built from their densities.

use serde::{Deserialize, Serialize};

use crate::densities::{lower_density, upper_banach_density, BanachDensity, HitSet, LowerDensity};
use crate::error::{Error, Result};
use crate::operators::LinearOperator;

/// `d_n = ||T^n x - x||_p` for `n = 1..=n_max` (index `n - 1`).
///
/// With `radius`, distances only see indices or levels `|k| <= radius`. On
/// truncated vectors this keeps the artificial edges out of the picture.
pub fn orbit_distances<O: LinearOperator>(
    op: &O,
    x: &O::Vector,
    n_max: u64,
    radius: Option<u64>,
) -> Result<Vec<f64>> {
    (1..=n_max as i64)
        .map(|n| op.distance(&op.power(x, n)?, x, radius))
        .collect()
}

/// `{1 <= n <= horizon : d_n < delta}` from precomputed distances.
pub fn hits_from_distances(distances: &[f64], delta: f64) -> HitSet {
    HitSet::from_predicate(distances.len() as u64, |n| distances[n as usize - 1] < delta)
}

/// `N(x, B(x, delta))` up to `n_max`.
pub fn recurrence_hits<O: LinearOperator>(
    op: &O,
    x: &O::Vector,
    delta: f64,
    n_max: u64,
    radius: Option<u64>,
) -> Result<HitSet> {
    check_delta(delta)?;
    Ok(hits_from_distances(
        &orbit_distances(op, x, n_max, radius)?,
        delta,
    ))
}

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && delta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "delta must be positive, got {delta}"
        )))
    }
}

/// `{0.5, 0.1, 0.01} * ||x||`.
pub fn default_delta_grid(norm: f64) -> Vec<f64> {
    [0.5, 0.1, 0.01].iter().map(|f| f * norm).collect()
}

/// `n_max / 8`, `n_max / 4`, `n_max / 2`, dropping zeros and duplicates.
pub fn default_window_lengths(n_max: u64) -> Vec<u64> {
    let mut lengths: Vec<u64> = [n_max / 8, n_max / 4, n_max / 2]
        .into_iter()
        .filter(|&l| l > 0)
        .collect();
    lengths.dedup();
    if lengths.is_empty() {
        lengths.push(n_max.max(1));
    }
    lengths
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    /// The lower-density surrogate clears the threshold at every radius.
    EvidenceFor,
    /// The return set is empty in the tail at the smallest radius.
    EvidenceAgainst,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub delta: f64,
    pub hits: HitSet,
    pub lower: LowerDensity,
    pub banach: BanachDensity,
    /// Number of hits in `[tail_start, n_max]`.
    pub tail_hits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceReport {
    pub evidence: Evidence,
    pub n_max: u64,
    pub tail_start: u64,
    pub density_threshold: f64,
    pub window_lengths: Vec<u64>,
    pub radius: Option<u64>,
    pub distances: Vec<f64>,
    pub per_delta: Vec<DeltaReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvidenceConfig {
    /// Absolute radii; `None` means [`default_delta_grid`] of `||x||`.
    pub delta_grid: Option<Vec<f64>>,
    pub n_max: u64,
    pub density_threshold: f64,
    /// Defaults to `n_max / 2`.
    pub tail_start: Option<u64>,
    /// Defaults to [`default_window_lengths`].
    pub window_lengths: Option<Vec<u64>>,
    pub radius: Option<u64>,
}

impl Default for EvidenceConfig {
    fn default() -> Self {
        Self {
            delta_grid: None,
            n_max: 2000,
            density_threshold: 0.01,
            tail_start: None,
            window_lengths: None,
            radius: None,
        }
    }
}

/// Computes the orbit once and judges every radius of the grid.
pub fn frequent_recurrence_evidence<O: LinearOperator>(
    op: &O,
    x: &O::Vector,
    config: &EvidenceConfig,
) -> Result<EvidenceReport> {
    if op.is_zero(x) {
        return Err(Error::ZeroVector("recurrence evidence needs a nonzero vector"));
    }
    if config.n_max == 0 {
        return Err(Error::EmptyHorizon);
    }
    let threshold = config.density_threshold;
    if !(threshold.is_finite() && threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "density threshold must lie in (0, 1], got {threshold}"
        )));
    }
    let grid = match &config.delta_grid {
        Some(g) => g.clone(),
        None => default_delta_grid(op.norm(x)?),
    };
    if grid.is_empty() {
        return Err(Error::InvalidParameter("delta grid is empty".into()));
    }
    for &delta in &grid {
        check_delta(delta)?;
    }
    let n_max = config.n_max;
    let tail_start = config.tail_start.unwrap_or((n_max / 2).max(1));
    let window_lengths = config
        .window_lengths
        .clone()
        .unwrap_or_else(|| default_window_lengths(n_max));

    let distances = orbit_distances(op, x, n_max, config.radius)?;
    let per_delta = grid
        .iter()
        .map(|&delta| {
            let hits = hits_from_distances(&distances, delta);
            let lower = lower_density(&hits, tail_start)?;
            let banach = upper_banach_density(&hits, &window_lengths)?;
            let tail_hits = hits.hits().iter().filter(|&&n| n >= tail_start).count();
            Ok(DeltaReport {
                delta,
                hits,
                lower,
                banach,
                tail_hits,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let smallest = per_delta
        .iter()
        .min_by(|a, b| a.delta.total_cmp(&b.delta))
        .expect("grid is nonempty");
    let evidence = if per_delta.iter().all(|r| r.lower.estimate >= threshold) {
        Evidence::EvidenceFor
    } else if smallest.tail_hits == 0 {
        Evidence::EvidenceAgainst
    } else {
        Evidence::Inconclusive
    };
    Ok(EvidenceReport {
        evidence,
        n_max,
        tail_start,
        density_threshold: threshold,
        window_lengths,
        radius: config.radius,
        distances,
        per_delta,
    })
}
