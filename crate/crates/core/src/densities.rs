//! Lower density and upper Banach density of finite hit sets.
//!
//! Both are limits; here they are finite surrogates. The lower density is the
//! minimum of `a_N = #(h ∩ [1, N]) / N` over a tail `N in [tail_start, horizon]`,
//! the upper Banach density the best windowed hit rate at the largest
//! requested window length. Both calculators return the full profile next to
//! the estimate so that truncation effects stay visible.
//!
//! The two estimates satisfy `lower <= banach` whenever some multiple of the
//! largest window length falls inside the tail (for instance when that
//! length is at most `horizon - tail_start + 1`): tiling `[1, N]` by windows
//! bounds `a_N` by the best window rate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A sorted set of visit times in `[1, horizon]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HitSet {
    hits: Vec<u64>,
    horizon: u64,
}

impl HitSet {
    pub fn new(hits: Vec<u64>, horizon: u64) -> Result<Self> {
        if hits.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "hit times must be strictly increasing".into(),
            ));
        }
        if let Some(&bad) = hits.iter().find(|&&n| n == 0 || n > horizon) {
            return Err(Error::InvalidParameter(format!(
                "hit time {bad} outside [1, {horizon}]"
            )));
        }
        Ok(Self { hits, horizon })
    }

    /// `{1 <= n <= horizon : hit(n)}`.
    pub fn from_predicate(horizon: u64, mut hit: impl FnMut(u64) -> bool) -> Self {
        Self {
            hits: (1..=horizon).filter(|&n| hit(n)).collect(),
            horizon,
        }
    }

    pub fn hits(&self) -> &[u64] {
        &self.hits
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.hits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hits.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.hits.binary_search(&n).is_ok()
    }

    pub fn is_subset_of(&self, other: &HitSet) -> bool {
        self.hits.iter().all(|&n| other.contains(n))
    }

    /// `counts[N] = #(h ∩ [1, N])` for `N = 0..=horizon`.
    pub fn prefix_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.horizon as usize + 1];
        for &n in &self.hits {
            counts[n as usize] += 1;
        }
        for j in 1..counts.len() {
            counts[j] += counts[j - 1];
        }
        counts
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerDensity {
    /// `min a_N` over the tail.
    pub estimate: f64,
    pub tail_start: u64,
    pub horizon: u64,
    /// `a_N` for `N = 1..=horizon` (index `N - 1`).
    pub sequence: Vec<f64>,
}

/// Lower-density surrogate over the tail `[tail_start, horizon]`.
pub fn lower_density(h: &HitSet, tail_start: u64) -> Result<LowerDensity> {
    if h.horizon == 0 {
        return Err(Error::EmptyHorizon);
    }
    if tail_start == 0 || tail_start > h.horizon {
        return Err(Error::InvalidParameter(format!(
            "tail start {tail_start} outside [1, {}]",
            h.horizon
        )));
    }
    let counts = h.prefix_counts();
    let sequence: Vec<f64> = (1..=h.horizon)
        .map(|n| counts[n as usize] as f64 / n as f64)
        .collect();
    let estimate = sequence[tail_start as usize - 1..]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(LowerDensity {
        estimate,
        tail_start,
        horizon: h.horizon,
        sequence,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowMaximum {
    pub length: u64,
    pub max_count: u64,
    /// First index of a window attaining `max_count`.
    pub start: u64,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanachDensity {
    /// Density at the largest window length.
    pub estimate: f64,
    pub profile: Vec<WindowMaximum>,
}

/// Best windowed hit rate for each window length (windows lie inside
/// `[1, horizon]`), via prefix counts in linear time per length.
pub fn upper_banach_density(h: &HitSet, window_lengths: &[u64]) -> Result<BanachDensity> {
    if h.horizon == 0 {
        return Err(Error::EmptyHorizon);
    }
    if window_lengths.is_empty() {
        return Err(Error::InvalidParameter("no window lengths given".into()));
    }
    if window_lengths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "window lengths must be strictly increasing".into(),
        ));
    }
    if let Some(&bad) = window_lengths.iter().find(|&&l| l == 0 || l > h.horizon) {
        return Err(Error::InvalidParameter(format!(
            "window length {bad} outside [1, {}]",
            h.horizon
        )));
    }
    let counts = h.prefix_counts();
    let profile: Vec<WindowMaximum> = window_lengths
        .iter()
        .map(|&length| {
            let (max_count, start) = (1..=h.horizon - length + 1)
                .map(|m| (counts[(m + length - 1) as usize] - counts[m as usize - 1], m))
                .fold((0, 1), |best, cur| if cur.0 > best.0 { cur } else { best });
            WindowMaximum {
                length,
                max_count,
                start,
                density: max_count as f64 / length as f64,
            }
        })
        .collect();
    Ok(BanachDensity {
        estimate: profile.last().map_or(0.0, |w| w.density),
        profile,
    })
}
