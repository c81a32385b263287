//! Simple functions on a measure tower, i.e. elements of `L^p(X)` that are
//! constant on every cell `(level, cell)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{check_exponent, Error, Result};
use crate::numerics::log_sum_exp;
use crate::tower::MeasureTower;

#[derive(Debug, Clone)]
pub struct TowerFunction {
    tower: Arc<MeasureTower>,
    coefficients: BTreeMap<(i64, usize), f64>,
}

impl TowerFunction {
    pub fn zero(tower: &Arc<MeasureTower>) -> Self {
        Self {
            tower: Arc::clone(tower),
            coefficients: BTreeMap::new(),
        }
    }

    /// Builds `phi` from `((level, cell), value)` pairs. Zeros are dropped and
    /// repeated keys summed; every level must be supported by the tower.
    pub fn new<I>(tower: &Arc<MeasureTower>, coefficients: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((i64, usize), f64)>,
    {
        let mut map = BTreeMap::new();
        for ((k, i), v) in coefficients {
            tower.require_level(k)?;
            if i >= tower.cell_count() {
                return Err(Error::InvalidParameter(format!(
                    "cell {i} out of range for a tower with {} cells",
                    tower.cell_count()
                )));
            }
            if !v.is_finite() {
                return Err(Error::NonFinite { index: k });
            }
            *map.entry((k, i)).or_insert(0.0) += v;
        }
        Ok(Self::from_map(tower, map))
    }

    /// Indicator of level `k` (all cells).
    pub fn level_indicator(tower: &Arc<MeasureTower>, k: i64) -> Result<Self> {
        Self::new(tower, (0..tower.cell_count()).map(|i| ((k, i), 1.0)))
    }

    pub(crate) fn from_map(tower: &Arc<MeasureTower>, mut map: BTreeMap<(i64, usize), f64>) -> Self {
        map.retain(|_, v| *v != 0.0);
        Self {
            tower: Arc::clone(tower),
            coefficients: map,
        }
    }

    pub fn tower(&self) -> &Arc<MeasureTower> {
        &self.tower
    }

    pub fn get(&self, level: i64, cell: usize) -> f64 {
        self.coefficients.get(&(level, cell)).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, usize), f64)> + '_ {
        self.coefficients.iter().map(|(&key, &v)| (key, v))
    }

    /// Lowest and highest level carrying a nonzero coefficient.
    pub fn level_bounds(&self) -> Option<(i64, i64)> {
        let lo = self.coefficients.keys().next()?.0;
        let hi = self.coefficients.keys().next_back()?.0;
        Some((lo, hi))
    }

    /// Levels with at least one nonzero coefficient, with the coefficients of
    /// that level as `(cell, value)` pairs.
    pub fn levels(&self) -> impl Iterator<Item = (i64, Vec<(usize, f64)>)> + '_ {
        let mut out: BTreeMap<i64, Vec<(usize, f64)>> = BTreeMap::new();
        for (&(k, i), &v) in &self.coefficients {
            out.entry(k).or_default().push((i, v));
        }
        out.into_iter()
    }

    /// `(sum_{k,i} |c_{k,i}|^p rho_{k,i})^(1/p)`, accumulated in log space.
    pub fn p_norm(&self, p: f64) -> Result<f64> {
        self.p_norm_filtered(p, |_| true)
    }

    /// The p-norm restricted to levels `|k| <= radius`.
    pub fn p_norm_within(&self, p: f64, radius: u64) -> Result<f64> {
        self.p_norm_filtered(p, |k| k.unsigned_abs() <= radius)
    }

    fn p_norm_filtered(&self, p: f64, keep: impl Fn(i64) -> bool) -> Result<f64> {
        check_exponent(p)?;
        let terms = self
            .coefficients
            .iter()
            .filter(|((k, _), _)| keep(*k))
            .map(|(&(k, i), &v)| Ok(p * v.abs().ln() + self.tower.ln_cell_mass(k, i)?))
            .collect::<Result<Vec<f64>>>()?;
        Ok((log_sum_exp(terms.iter().copied()) / p).exp())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_map(
            &self.tower,
            self.coefficients
                .iter()
                .map(|(&key, &v)| (key, v * factor))
                .collect(),
        )
    }

    /// `self + sign * other`. Both functions must live on the same tower.
    pub fn combine(&self, other: &Self, sign: f64) -> Result<Self> {
        if !Arc::ptr_eq(&self.tower, &other.tower) {
            return Err(Error::InvalidParameter(
                "tower functions live on different towers".into(),
            ));
        }
        let mut map = self.coefficients.clone();
        for (&key, &v) in &other.coefficients {
            *map.entry(key).or_insert(0.0) += sign * v;
        }
        Ok(Self::from_map(&self.tower, map))
    }
}
