//! Positive weight sequences for bilateral weighted backward shifts.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::SAFE_LN;
use crate::tower::LevelMasses;

/// How the weights `w_k` are defined.
#[derive(Debug, Clone)]
pub enum WeightProfile {
    /// `w_k = value` for every `k`.
    Constant(f64),
    /// `w_k = positive` for `k >= 1` and `w_k = nonpositive` for `k <= 0`.
    Split { nonpositive: f64, positive: f64 },
    /// Explicit values for `k = -M..=M`; no extension past the window.
    Table(Vec<f64>),
    /// `w_k = (mu_{k-1} / mu_k)^(1/p)` read off a tower's level masses.
    Masses { masses: Arc<LevelMasses>, p: f64 },
}

/// A weight sequence `{w_k}` on the window `[-M, M]`.
///
/// Closed-form profiles may be evaluated anywhere; tables only inside the
/// window. `w_min` and `w_max` are taken over the window indices where the
/// sequence is defined.
#[derive(Debug, Clone)]
pub struct WeightSequence {
    profile: WeightProfile,
    window: u64,
    /// Table profile only: `ln_prefix[j] = sum of ln w over the first j table entries`.
    ln_prefix: Vec<f64>,
    w_min: f64,
    w_max: f64,
}

impl WeightSequence {
    pub fn constant(value: f64, window: u64) -> Result<Self> {
        Self::build(WeightProfile::Constant(value), window)
    }

    pub fn split(nonpositive: f64, positive: f64, window: u64) -> Result<Self> {
        Self::build(
            WeightProfile::Split {
                nonpositive,
                positive,
            },
            window,
        )
    }

    /// `values[j]` is `w_{j - M}`; exactly `2M + 1` values are required.
    pub fn table(values: Vec<f64>, window: u64) -> Result<Self> {
        let expected = 2 * window as usize + 1;
        if values.len() != expected {
            return Err(Error::InvalidParameter(format!(
                "weight table for window {window} needs {expected} values, got {}",
                values.len()
            )));
        }
        Self::build(WeightProfile::Table(values), window)
    }

    pub(crate) fn from_masses(masses: Arc<LevelMasses>, p: f64, window: u64) -> Result<Self> {
        Self::build(WeightProfile::Masses { masses, p }, window)
    }

    fn build(profile: WeightProfile, window: u64) -> Result<Self> {
        let mut seq = Self {
            profile,
            window,
            ln_prefix: Vec::new(),
            w_min: f64::INFINITY,
            w_max: 0.0,
        };
        match &seq.profile {
            WeightProfile::Constant(v) => check_weight(0, *v)?,
            WeightProfile::Split {
                nonpositive,
                positive,
            } => {
                check_weight(0, *nonpositive)?;
                check_weight(1, *positive)?;
            }
            WeightProfile::Table(values) => {
                let mut acc = 0.0;
                seq.ln_prefix.reserve(values.len() + 1);
                seq.ln_prefix.push(0.0);
                for (j, &v) in values.iter().enumerate() {
                    check_weight(j as i64 - window as i64, v)?;
                    acc += v.ln();
                    seq.ln_prefix.push(acc);
                }
            }
            WeightProfile::Masses { p, .. } => crate::error::check_exponent(*p)?,
        }
        let m = window as i64;
        for k in -m..=m {
            match seq.weight(k) {
                Ok(w) => {
                    check_weight(k, w)?;
                    seq.w_min = seq.w_min.min(w);
                    seq.w_max = seq.w_max.max(w);
                }
                Err(Error::WindowExceeded { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(seq)
    }

    pub fn profile(&self) -> &WeightProfile {
        &self.profile
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    pub fn w_min(&self) -> f64 {
        self.w_min
    }

    pub fn w_max(&self) -> f64 {
        self.w_max
    }

    /// True when the weights are defined past the window.
    pub fn extends(&self) -> bool {
        match &self.profile {
            WeightProfile::Constant(_) | WeightProfile::Split { .. } => true,
            WeightProfile::Table(_) => false,
            WeightProfile::Masses { masses, .. } => masses.extends(),
        }
    }

    /// `w_k`.
    pub fn weight(&self, k: i64) -> Result<f64> {
        match &self.profile {
            WeightProfile::Constant(v) => Ok(*v),
            WeightProfile::Split {
                nonpositive,
                positive,
            } => Ok(if k >= 1 { *positive } else { *nonpositive }),
            WeightProfile::Table(values) => Ok(values[self.table_slot(k)?]),
            WeightProfile::Masses { masses, p } => Ok(root(
                masses.ratio(k.checked_sub(1).ok_or_else(|| overflow(k))?, k)?,
                *p,
            )),
        }
    }

    /// `ln prod_{nu=a}^{b} w_nu`; the empty product (`a > b`) is 0.
    pub fn ln_product(&self, a: i64, b: i64) -> Result<f64> {
        if a > b {
            return Ok(0.0);
        }
        match &self.profile {
            WeightProfile::Constant(v) => Ok(span(a, b) * v.ln()),
            WeightProfile::Split {
                nonpositive,
                positive,
            } => {
                let (neg, pos) = split_counts(a, b);
                Ok(neg * nonpositive.ln() + pos * positive.ln())
            }
            WeightProfile::Table(_) => {
                let lo = self.table_slot(a)?;
                let hi = self.table_slot(b)?;
                Ok(self.ln_prefix[hi + 1] - self.ln_prefix[lo])
            }
            WeightProfile::Masses { masses, p } => {
                // Telescopes: prod_{a}^{b} (mu_{nu-1}/mu_nu)^(1/p) = (mu_{a-1}/mu_b)^(1/p).
                let before = a.checked_sub(1).ok_or_else(|| overflow(a))?;
                Ok((masses.ln_mass(before)? - masses.ln_mass(b)?) / p)
            }
        }
    }

    /// `prod_{nu=a}^{b} w_nu`.
    ///
    /// The log form decides whether the product is representable; when it
    /// is, closed-form profiles are evaluated directly (integer powers,
    /// mass ratios) so that e.g. powers of two stay exact.
    pub fn product(&self, a: i64, b: i64) -> Result<f64> {
        let ln = self.ln_product(a, b)?;
        if ln.abs() > SAFE_LN {
            return Ok(ln.exp());
        }
        let direct = match &self.profile {
            WeightProfile::Constant(v) => int_pow(*v, span(a, b)),
            WeightProfile::Split {
                nonpositive,
                positive,
            } => {
                let (neg, pos) = split_counts(a, b);
                match (int_pow(*nonpositive, neg), int_pow(*positive, pos)) {
                    (Some(x), Some(y)) => Some(x * y),
                    _ => None,
                }
            }
            WeightProfile::Table(_) => None,
            WeightProfile::Masses { masses, p } => {
                Some(root(masses.ratio(a - 1, b)?, *p)).filter(|v| v.is_normal())
            }
        };
        Ok(direct.unwrap_or_else(|| ln.exp()))
    }

    fn table_slot(&self, k: i64) -> Result<usize> {
        if k.unsigned_abs() > self.window {
            Err(Error::WindowExceeded {
                index: k,
                window: self.window,
            })
        } else {
            Ok((k + self.window as i64) as usize)
        }
    }
}

fn check_weight(index: i64, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveWeight { index, value })
    }
}

fn overflow(k: i64) -> Error {
    Error::InvalidParameter(format!("index {k} overflows"))
}

fn root(ratio: f64, p: f64) -> f64 {
    if p == 1.0 {
        ratio
    } else {
        ratio.powf(1.0 / p)
    }
}

fn span(a: i64, b: i64) -> f64 {
    (b - a + 1) as f64
}

/// Number of indices in `[a, b]` that are `<= 0` and `>= 1`.
fn split_counts(a: i64, b: i64) -> (f64, f64) {
    let neg = (b.min(0) - a + 1).max(0);
    let pos = (b - a.max(1) + 1).max(0);
    (neg as f64, pos as f64)
}

fn int_pow(base: f64, exponent: f64) -> Option<f64> {
    if exponent > i32::MAX as f64 {
        return None;
    }
    let v = base.powi(exponent as i32);
    v.is_normal().then_some(v)
}
