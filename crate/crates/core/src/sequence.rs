//! Finitely supported sequences on the integers, i.e. elements of `l^p(Z)`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{check_exponent, Error, Result};
use crate::numerics::scaled_p_norm;

/// A sparse bilateral sequence. Absent indices are zero.
///
/// Every stored index satisfies `|i| <= window`. Operations that move the
/// support (shifts) widen the window to cover the new support; whether that
/// move was legal is decided by the weights, not by the sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BilateralSequence {
    entries: BTreeMap<i64, f64>,
    window: u64,
}

impl BilateralSequence {
    pub fn zero(window: u64) -> Self {
        Self {
            entries: BTreeMap::new(),
            window,
        }
    }

    pub fn unit(index: i64, window: u64) -> Result<Self> {
        Self::from_entries([(index, 1.0)], window)
    }

    /// Builds a sequence from `(index, value)` pairs. Zeros are dropped,
    /// repeated indices are summed.
    pub fn from_entries<I>(entries: I, window: u64) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, f64)>,
    {
        let mut map = BTreeMap::new();
        for (i, v) in entries {
            if i.unsigned_abs() > window {
                return Err(Error::WindowExceeded { index: i, window });
            }
            if !v.is_finite() {
                return Err(Error::NonFinite { index: i });
            }
            *map.entry(i).or_insert(0.0) += v;
        }
        map.retain(|_, v| *v != 0.0);
        Ok(Self { entries: map, window })
    }

    /// Internal constructor for results of exact operations; the window is
    /// widened to cover the support.
    pub(crate) fn from_map(mut entries: BTreeMap<i64, f64>, window: u64) -> Self {
        entries.retain(|_, v| *v != 0.0);
        let reach = entries.keys().map(|i| i.unsigned_abs()).max().unwrap_or(0);
        Self {
            entries,
            window: window.max(reach),
        }
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    pub fn get(&self, index: i64) -> f64 {
        self.entries.get(&index).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of stored (nonzero) entries.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Smallest and largest nonzero index.
    pub fn support_bounds(&self) -> Option<(i64, i64)> {
        let lo = *self.entries.keys().next()?;
        let hi = *self.entries.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + Clone + '_ {
        self.entries.iter().map(|(&i, &v)| (i, v))
    }

    /// `(sum_i |x_i|^p)^(1/p)`.
    pub fn p_norm(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        Ok(scaled_p_norm(self.entries.values().copied(), p))
    }

    /// The p-norm of the part of the sequence with `|i| <= radius`.
    pub fn p_norm_within(&self, p: f64, radius: u64) -> Result<f64> {
        check_exponent(p)?;
        let r = radius.min(i64::MAX as u64) as i64;
        Ok(scaled_p_norm(self.entries.range(-r..=r).map(|(_, &v)| v), p))
    }

    /// Keeps only indices with `|i| <= radius`.
    pub fn truncate(&self, radius: u64) -> Self {
        let r = radius.min(i64::MAX as u64) as i64;
        Self::from_map(
            self.entries.range(-r..=r).map(|(&i, &v)| (i, v)).collect(),
            self.window.min(radius),
        )
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_map(
            self.entries.iter().map(|(&i, &v)| (i, v * factor)).collect(),
            self.window,
        )
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        let mut out = self.entries.clone();
        for (&i, &v) in &other.entries {
            *out.entry(i).or_insert(0.0) += sign * v;
        }
        Self::from_map(out, self.window.max(other.window))
    }
}

impl Add for &BilateralSequence {
    type Output = BilateralSequence;

    fn add(self, rhs: Self) -> BilateralSequence {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &BilateralSequence {
    type Output = BilateralSequence;

    fn sub(self, rhs: Self) -> BilateralSequence {
        self.combine(rhs, -1.0)
    }
}

impl Mul<f64> for &BilateralSequence {
    type Output = BilateralSequence;

    fn mul(self, rhs: f64) -> BilateralSequence {
        self.scale(rhs)
    }
}
