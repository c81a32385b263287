//! The factor relation between a dissipative composition operator and a
//! bilateral weighted backward shift.
//!
//! With `w_k = (mu_{k-1} / mu_k)^(1/p)` and
//! `Pi(phi)_k = mu_k^(1/p) / mu(W) * integral over W of phi o f^k`,
//! one has `Pi o T_f = B_w o Pi`. On a tower the integral is a cellwise sum:
//! `phi o f^k` equals `c_{k,i}` on cell `i` of `W`, which has mass
//! `p_i mu(W)`, so `Pi(phi)_k = mu_k^(1/p) * sum_i p_i c_{k,i}`.
//!
//! Norm of `Pi`: by Jensen on the cell average,
//! `|sum_i p_i c_{k,i}|^p mu_k <= sum_i p_i mu_k |c_{k,i}|^p <= K sum_i rho_{k,i} |c_{k,i}|^p`,
//! so `||Pi|| <= K^(1/p)`, and `||Pi|| <= 1` when `K = 1`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::TowerFunction;
use crate::numerics::from_log;
use crate::operators::{apply_composition, apply_shift};
use crate::sequence::BilateralSequence;
use crate::tower::MeasureTower;
use crate::weights::WeightSequence;

/// Weights of the shift factor, `w_k = (mu(f^{k-1}(W)) / mu(f^k(W)))^(1/p)`.
pub fn derive_weights(tower: &MeasureTower) -> Result<WeightSequence> {
    WeightSequence::from_masses(Arc::clone(tower.masses()), tower.exponent(), tower.window())
}

/// `mu_k^(1/p)`, or its logarithm when it is not representable.
fn level_root(tower: &MeasureTower, k: i64) -> Result<(f64, f64)> {
    let p = tower.exponent();
    let ln = tower.ln_level_mass(k)? / p;
    let mass = tower.level_mass(k)?;
    let root = if p == 1.0 { mass } else { mass.powf(1.0 / p) };
    Ok((root, ln))
}

/// `Pi(phi)`.
pub fn factor_map(tower: &MeasureTower, phi: &TowerFunction) -> Result<BilateralSequence> {
    let fractions = tower.cell_fractions();
    let mut out = BTreeMap::new();
    for (k, cells) in phi.levels() {
        let average: f64 = cells.iter().map(|&(i, c)| c * fractions[i]).sum();
        if average == 0.0 {
            continue;
        }
        let (root, ln_root) = level_root(tower, k)?;
        let value = if root.is_normal() {
            root * average
        } else {
            from_log(average, average.abs().ln() + ln_root)
        };
        out.insert(k, value);
    }
    Ok(BilateralSequence::from_map(out, tower.window()))
}

/// The level-constant right inverse of `Pi`: `c_{k,i} = y_k / mu_k^(1/p)`.
///
/// `Pi(lift(y)) = y` and, since `sum_i rho_{k,i} = mu_k`, `||lift(y)|| = ||y||`.
pub fn lift(tower: &Arc<MeasureTower>, y: &BilateralSequence) -> Result<TowerFunction> {
    let mut map = BTreeMap::new();
    for (k, v) in y.iter() {
        let (root, ln_root) = level_root(tower, k)?;
        let c = if root.is_normal() {
            v / root
        } else {
            from_log(v, v.abs().ln() - ln_root)
        };
        if !c.is_finite() {
            return Err(Error::NonFinite { index: k });
        }
        for i in 0..tower.cell_count() {
            map.insert((k, i), c);
        }
    }
    Ok(TowerFunction::from_map(tower, map))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemiconjugacyReport {
    /// `r_n = ||Pi(T_f^n phi) - B_w^n Pi(phi)||_p` for `n = 1..=n_steps`.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// `tol * max(1, ||phi||_p)`.
    pub threshold: f64,
    pub passed: bool,
}

/// Checks `Pi o T_f^n = B_w^n o Pi` on `phi` for `1 <= n <= n_steps`.
pub fn check_semiconjugacy(
    tower: &Arc<MeasureTower>,
    phi: &TowerFunction,
    n_steps: u64,
    tol: f64,
) -> Result<SemiconjugacyReport> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be >= 0, got {tol}"
        )));
    }
    let p = tower.exponent();
    let weights = derive_weights(tower)?;
    let image = factor_map(tower, phi)?;
    let mut residuals = Vec::with_capacity(n_steps as usize);
    for n in 1..=n_steps as i64 {
        let left = factor_map(tower, &apply_composition(phi, n)?)?;
        let right = apply_shift(&weights, &image, n)?;
        residuals.push((&left - &right).p_norm(p)?);
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let threshold = tol * phi.p_norm(p)?.max(1.0);
    Ok(SemiconjugacyReport {
        passed: max_residual <= threshold,
        residuals,
        max_residual,
        threshold,
    })
}

/// `||Pi(phi)|| / ||phi||`, the empirical norm ratio reported for `K > 1`.
pub fn factor_norm_ratio(tower: &MeasureTower, phi: &TowerFunction) -> Result<Option<f64>> {
    let p = tower.exponent();
    let denom = phi.p_norm(p)?;
    if denom == 0.0 {
        return Ok(None);
    }
    Ok(Some(factor_map(tower, phi)?.p_norm(p)? / denom))
}
