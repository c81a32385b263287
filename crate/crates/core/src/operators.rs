//! Exact application of the weighted backward shift `B_w` and the
//! composition operator `T_f`, including negative powers.
//!
//! Powers are never formed by iterating: `B_w^n` is an index relabeling plus
//! one weight product, `T_f^n` a pure relabeling of levels.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{check_exponent, Error, Result};
use crate::function::TowerFunction;
use crate::numerics::from_log;
use crate::sequence::BilateralSequence;
use crate::tower::MeasureTower;
use crate::weights::WeightSequence;

/// `B_w^n x`.
///
/// For `n >= 1`, `(B_w^n x)_i = (w_{i+1} ... w_{i+n}) x_{i+n}`; negative `n`
/// applies the inverse `(B_w^{-1} y)_i = y_{i-1} / w_i` the same number of
/// times. Weight lookups past the end of a table are errors.
pub fn apply_shift(w: &WeightSequence, x: &BilateralSequence, n: i64) -> Result<BilateralSequence> {
    if n == 0 {
        return Ok(x.clone());
    }
    let mut out = BTreeMap::new();
    for (j, v) in x.iter() {
        // Entry j lands at j - n; the factor is the product of the weights
        // between the two positions, inverted for negative powers.
        let (target, a, b, invert) = if n > 0 {
            (j - n, j - n + 1, j, false)
        } else {
            (j - n, j + 1, j - n, true)
        };
        if !w.extends() && target.unsigned_abs() > w.window() {
            return Err(Error::WindowExceeded {
                index: target,
                window: w.window(),
            });
        }
        let product = w.product(a, b)?;
        let value = if product.is_normal() {
            if invert {
                v / product
            } else {
                v * product
            }
        } else {
            let ln = w.ln_product(a, b)?;
            let ln = if invert { -ln } else { ln };
            from_log(v, v.abs().ln() + ln)
        };
        out.insert(target, value);
    }
    Ok(BilateralSequence::from_map(out, x.window()))
}

/// `T_f^n phi = phi o f^n`: the coefficient on level `k` becomes the old
/// coefficient on level `k + n`, since `f` maps level `k` onto level `k + 1`.
pub fn apply_composition(phi: &TowerFunction, n: i64) -> Result<TowerFunction> {
    if n == 0 {
        return Ok(phi.clone());
    }
    let tower = phi.tower();
    let mut out = BTreeMap::new();
    for ((k, i), v) in phi.iter() {
        let target = k - n;
        tower.require_level(target)?;
        out.insert((target, i), v);
    }
    Ok(TowerFunction::from_map(tower, out))
}

/// `(c^(1/p), d^(1/p))`, the change-of-variables bounds on `||T_f||` and
/// `||T_f^{-1}||`.
pub fn operator_norm_bound(tower: &MeasureTower) -> (f64, f64) {
    let star = tower.star();
    let p = tower.exponent();
    (star.c.powf(1.0 / p), star.d.powf(1.0 / p))
}

/// Common surface of the two operators for orbit experiments.
pub trait LinearOperator: Send + Sync {
    type Vector: Clone + Send + Sync;

    fn exponent(&self) -> f64;

    /// `T^n x` for any integer `n`.
    fn power(&self, x: &Self::Vector, n: i64) -> Result<Self::Vector>;

    /// `||a - b||_p`, optionally restricted to indices/levels `|k| <= radius`.
    fn distance(&self, a: &Self::Vector, b: &Self::Vector, radius: Option<u64>) -> Result<f64>;

    fn norm(&self, x: &Self::Vector) -> Result<f64>;

    fn is_zero(&self, x: &Self::Vector) -> bool;
}

/// `B_w` on `l^p(Z)`.
#[derive(Debug, Clone)]
pub struct WeightedShift {
    weights: Arc<WeightSequence>,
    p: f64,
}

impl WeightedShift {
    pub fn new(weights: Arc<WeightSequence>, p: f64) -> Result<Self> {
        check_exponent(p)?;
        Ok(Self { weights, p })
    }

    pub fn weights(&self) -> &Arc<WeightSequence> {
        &self.weights
    }
}

impl LinearOperator for WeightedShift {
    type Vector = BilateralSequence;

    fn exponent(&self) -> f64 {
        self.p
    }

    fn power(&self, x: &BilateralSequence, n: i64) -> Result<BilateralSequence> {
        apply_shift(&self.weights, x, n)
    }

    fn distance(&self, a: &BilateralSequence, b: &BilateralSequence, radius: Option<u64>) -> Result<f64> {
        let diff = a - b;
        match radius {
            Some(r) => diff.p_norm_within(self.p, r),
            None => diff.p_norm(self.p),
        }
    }

    fn norm(&self, x: &BilateralSequence) -> Result<f64> {
        x.p_norm(self.p)
    }

    fn is_zero(&self, x: &BilateralSequence) -> bool {
        x.is_zero()
    }
}

/// `T_f` on `L^p(X)`, for the tower's own exponent.
#[derive(Debug, Clone)]
pub struct CompositionOperator {
    tower: Arc<MeasureTower>,
}

impl CompositionOperator {
    pub fn new(tower: Arc<MeasureTower>) -> Self {
        Self { tower }
    }

    pub fn tower(&self) -> &Arc<MeasureTower> {
        &self.tower
    }
}

impl LinearOperator for CompositionOperator {
    type Vector = TowerFunction;

    fn exponent(&self) -> f64 {
        self.tower.exponent()
    }

    fn power(&self, x: &TowerFunction, n: i64) -> Result<TowerFunction> {
        apply_composition(x, n)
    }

    fn distance(&self, a: &TowerFunction, b: &TowerFunction, radius: Option<u64>) -> Result<f64> {
        let diff = a.combine(b, -1.0)?;
        match radius {
            Some(r) => diff.p_norm_within(self.exponent(), r),
            None => diff.p_norm(self.exponent()),
        }
    }

    fn norm(&self, x: &TowerFunction) -> Result<f64> {
        x.p_norm(self.exponent())
    }

    fn is_zero(&self, x: &TowerFunction) -> bool {
        x.is_zero()
    }
}
