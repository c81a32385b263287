//! Measure towers: the finite model of a dissipative system
//! `X = disjoint union of f^k(W)`, `k` in `Z`.
//!
//! A tower stores the level masses `mu(f^k(W))` and a partition of the
//! wandering set `W` into `m` cells with fractions `p_i`. The map `f` sends
//! cell `(k, i)` onto cell `(k + 1, i)`, so its measure-theoretic content is
//! entirely described by the cell masses `rho_{k,i}`. Without an explicit
//! cell table, `rho_{k,i} = p_i * mu(f^k(W))` and the distortion is exactly 1.
//!
//! Finitely many cells stand in for the sigma-algebra on `W`; this is a
//! desk-scale discretization, not a faithful model of every measurable set.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{check_exponent, Error, Result};
use crate::numerics::SAFE_LN;
use crate::weights::WeightSequence;

/// Relative tolerance for the sum rules on cell fractions and cell masses.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Closed-form or tabulated level masses, before scaling by `mu(W)`.
#[derive(Debug, Clone)]
pub enum LevelProfile {
    /// `mu_k = mu(W) * ratio^|k|`.
    Geometric { ratio: f64 },
    /// `mu_k = mu(W)`.
    Flat,
    /// `mu_k = mu(W) / (|k| + 1)`.
    Harmonic,
    /// Absolute masses for `k = -M..=M`; `mu(W)` is the middle entry.
    Table(Vec<f64>),
    /// Masses whose adjacent ratios reproduce the given weights:
    /// `mu_k = mu(W) * (w_1 ... w_k)^(-p)` for `k > 0` and
    /// `mu_{-k} = mu(W) * (w_0 w_{-1} ... w_{-k+1})^p`.
    Weights { weights: Arc<WeightSequence>, p: f64 },
}

/// Level masses `k -> mu(f^k(W))`, evaluated in log space.
#[derive(Debug, Clone)]
pub struct LevelMasses {
    profile: LevelProfile,
    window: u64,
    ln_scale: f64,
    table: Vec<f64>,
    ln_table: Vec<f64>,
}

impl LevelMasses {
    pub fn new(profile: LevelProfile, scale: f64, window: u64) -> Result<Self> {
        let ln_table = match &profile {
            LevelProfile::Table(masses) => {
                let expected = 2 * window as usize + 1;
                if masses.len() != expected {
                    return Err(Error::InvalidParameter(format!(
                        "mass table for window {window} needs {expected} values, got {}",
                        masses.len()
                    )));
                }
                masses
                    .iter()
                    .enumerate()
                    .map(|(j, &m)| {
                        if m.is_finite() && m > 0.0 {
                            Ok(m.ln())
                        } else {
                            Err(Error::NonPositiveMass {
                                level: j as i64 - window as i64,
                                mass: m,
                            })
                        }
                    })
                    .collect::<Result<Vec<_>>>()?
            }
            _ => Vec::new(),
        };
        let ln_scale = match &profile {
            LevelProfile::Table(_) => ln_table[window as usize],
            _ => {
                if !(scale.is_finite() && scale > 0.0) {
                    return Err(Error::NonPositiveMass {
                        level: 0,
                        mass: scale,
                    });
                }
                scale.ln()
            }
        };
        match &profile {
            LevelProfile::Geometric { ratio } if !(ratio.is_finite() && *ratio > 0.0) => {
                return Err(Error::InvalidParameter(format!(
                    "geometric ratio must be positive, got {ratio}"
                )));
            }
            LevelProfile::Weights { p, .. } => check_exponent(*p)?,
            _ => {}
        }
        let table = match &profile {
            LevelProfile::Table(masses) => masses.clone(),
            _ => Vec::new(),
        };
        Ok(Self {
            profile,
            window,
            ln_scale,
            table,
            ln_table,
        })
    }

    pub fn profile(&self) -> &LevelProfile {
        &self.profile
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    /// `mu(W)`.
    pub fn base_mass(&self) -> f64 {
        self.ln_scale.exp()
    }

    /// True when masses are defined on all of `Z`.
    pub fn extends(&self) -> bool {
        match &self.profile {
            LevelProfile::Geometric { .. } | LevelProfile::Flat | LevelProfile::Harmonic => true,
            LevelProfile::Table(_) => false,
            LevelProfile::Weights { weights, .. } => weights.extends(),
        }
    }

    /// Whether `mu_k` can be evaluated.
    pub fn supports(&self, k: i64) -> bool {
        match &self.profile {
            LevelProfile::Table(_) => k.unsigned_abs() <= self.window,
            LevelProfile::Weights { weights, .. } => {
                // mu_k needs w_1..w_k (k > 0) or w_{k+1}..w_0 (k < 0).
                let reach = weights.window() as i64;
                weights.extends() || (k <= reach && k >= -reach - 1)
            }
            _ => true,
        }
    }

    pub fn ln_mass(&self, k: i64) -> Result<f64> {
        let ln = match &self.profile {
            LevelProfile::Geometric { ratio } => self.ln_scale + k.unsigned_abs() as f64 * ratio.ln(),
            LevelProfile::Flat => self.ln_scale,
            LevelProfile::Harmonic => self.ln_scale - (k.unsigned_abs() as f64 + 1.0).ln(),
            LevelProfile::Table(_) => {
                if k.unsigned_abs() > self.window {
                    return Err(Error::WindowExceeded {
                        index: k,
                        window: self.window,
                    });
                }
                self.ln_table[(k + self.window as i64) as usize]
            }
            LevelProfile::Weights { weights, p } => {
                if k >= 0 {
                    self.ln_scale - p * weights.ln_product(1, k)?
                } else {
                    self.ln_scale + p * weights.ln_product(k + 1, 0)?
                }
            }
        };
        if ln.is_nan() || ln == f64::INFINITY {
            return Err(Error::NonPositiveMass {
                level: k,
                mass: ln.exp(),
            });
        }
        Ok(ln)
    }

    /// `mu_k` in the linear domain (may underflow to 0 for deep levels).
    pub fn mass(&self, k: i64) -> Result<f64> {
        let ln = self.ln_mass(k)?;
        if let LevelProfile::Table(_) = &self.profile {
            return Ok(self.table[(k + self.window as i64) as usize]);
        }
        if let LevelProfile::Geometric { ratio } = &self.profile {
            if ln.abs() <= SAFE_LN && k.unsigned_abs() <= i32::MAX as u64 {
                return Ok(self.ln_scale.exp() * ratio.powi(k.unsigned_abs() as i32));
            }
        }
        if let LevelProfile::Weights { weights, p } = &self.profile {
            if ln.abs() <= SAFE_LN {
                let product = if k >= 0 {
                    weights.product(1, k)?.recip()
                } else {
                    weights.product(k + 1, 0)?
                };
                let factor = if *p == 1.0 { product } else { product.powf(*p) };
                if factor.is_normal() {
                    return Ok(self.ln_scale.exp() * factor);
                }
            }
        }
        Ok(ln.exp())
    }

    /// `mu_a / mu_b`, exact for the closed-form profiles whenever representable.
    pub fn ratio(&self, a: i64, b: i64) -> Result<f64> {
        let ln = self.ln_mass(a)? - self.ln_mass(b)?;
        let direct = match &self.profile {
            LevelProfile::Flat => Some(1.0),
            LevelProfile::Harmonic => Some((b.unsigned_abs() as f64 + 1.0) / (a.unsigned_abs() as f64 + 1.0)),
            LevelProfile::Geometric { ratio } if ln.abs() <= SAFE_LN => {
                let steps = a.unsigned_abs() as i128 - b.unsigned_abs() as i128;
                i32::try_from(steps).ok().map(|s| ratio.powi(s))
            }
            LevelProfile::Geometric { .. } => None,
            LevelProfile::Table(_) | LevelProfile::Weights { .. } if ln.abs() <= SAFE_LN => {
                let (ma, mb) = (self.mass(a)?, self.mass(b)?);
                (ma.is_normal() && mb.is_normal()).then(|| ma / mb)
            }
            _ => None,
        };
        Ok(direct.unwrap_or_else(|| ln.exp()))
    }
}

/// Raw tower data, as read from a configuration.
#[derive(Debug, Clone)]
pub struct TowerSpec {
    pub window: u64,
    pub levels: LevelProfile,
    /// `mu(W)`; ignored for tabulated masses.
    pub scale: f64,
    pub cell_fractions: Vec<f64>,
    /// Optional absolute cell masses `rho[k + M][i]` on the window.
    pub cell_masses: Option<Vec<Vec<f64>>>,
    /// Optional cell shares `rho_{k,i} / mu_k` on the window, for levels too
    /// deep to tabulate absolute masses. At most one of the two tables.
    pub cell_shares: Option<Vec<Vec<f64>>>,
    /// Declared distortion constant `K >= 1`.
    pub distortion: f64,
    /// Exponent `p` of the ambient `L^p` space.
    pub exponent: f64,
}

impl TowerSpec {
    /// One-cell, undistorted tower.
    pub fn simple(levels: LevelProfile, window: u64, exponent: f64) -> Self {
        Self {
            window,
            levels,
            scale: 1.0,
            cell_fractions: vec![1.0],
            cell_masses: None,
            cell_shares: None,
            distortion: 1.0,
            exponent,
        }
    }
}

/// The constants of condition (star) for `f^{-1}` and `f`, and the
/// tightest distortion constant consistent with the cell masses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarConstants {
    /// `max rho_{k-1,i} / rho_{k,i}` over the window.
    pub c: f64,
    /// `max rho_{k+1,i} / rho_{k,i}` over the window.
    pub d: f64,
    /// Effective distortion `K_eff`.
    pub distortion: f64,
}

/// A validated measure tower. Immutable; share it through `Arc`.
#[derive(Debug)]
pub struct MeasureTower {
    window: u64,
    masses: Arc<LevelMasses>,
    cell_fractions: Vec<f64>,
    /// Relative shares `rho_{k,i} / mu_k` per window level, when given.
    cell_shares: Option<Vec<Vec<f64>>>,
    declared_distortion: f64,
    exponent: f64,
    star: StarConstants,
}

impl MeasureTower {
    pub fn new(spec: TowerSpec) -> Result<Arc<Self>> {
        let masses = Arc::new(LevelMasses::new(spec.levels.clone(), spec.scale, spec.window)?);
        let cell_shares = match (&spec.cell_masses, &spec.cell_shares) {
            (None, None) => None,
            (Some(rho), None) => Some(relative_shares(&masses, rho, spec.window)?),
            (None, Some(shares)) => Some(checked_shares(shares, spec.window)?),
            (Some(_), Some(_)) => {
                return Err(Error::InvalidParameter(
                    "give either cell masses or cell shares, not both".into(),
                ))
            }
        };
        let mut tower = Self {
            window: spec.window,
            masses,
            cell_fractions: spec.cell_fractions.clone(),
            cell_shares,
            declared_distortion: spec.distortion,
            exponent: spec.exponent,
            star: StarConstants {
                c: f64::NAN,
                d: f64::NAN,
                distortion: f64::NAN,
            },
        };
        tower.star = tower.check()?;
        Ok(Arc::new(tower))
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn masses(&self) -> &Arc<LevelMasses> {
        &self.masses
    }

    pub fn cell_count(&self) -> usize {
        self.cell_fractions.len()
    }

    pub fn cell_fractions(&self) -> &[f64] {
        &self.cell_fractions
    }

    pub fn has_cell_table(&self) -> bool {
        self.cell_shares.is_some()
    }

    pub fn declared_distortion(&self) -> f64 {
        self.declared_distortion
    }

    pub fn star(&self) -> StarConstants {
        self.star
    }

    /// `mu(W)`.
    pub fn base_mass(&self) -> f64 {
        self.masses.base_mass()
    }

    /// True when every level of `Z` is available.
    pub fn extends(&self) -> bool {
        self.cell_shares.is_none() && self.masses.extends()
    }

    pub fn supports_level(&self, k: i64) -> bool {
        if self.cell_shares.is_some() && k.unsigned_abs() > self.window {
            return false;
        }
        self.masses.supports(k)
    }

    pub(crate) fn require_level(&self, k: i64) -> Result<()> {
        if self.supports_level(k) {
            Ok(())
        } else {
            Err(Error::WindowExceeded {
                index: k,
                window: self.window,
            })
        }
    }

    pub fn ln_level_mass(&self, k: i64) -> Result<f64> {
        self.require_level(k)?;
        self.masses.ln_mass(k)
    }

    pub fn level_mass(&self, k: i64) -> Result<f64> {
        self.require_level(k)?;
        self.masses.mass(k)
    }

    /// `rho_{k,i} / mu_k`.
    pub fn cell_share(&self, k: i64, cell: usize) -> Result<f64> {
        self.require_level(k)?;
        Ok(match &self.cell_shares {
            Some(shares) => shares[(k + self.window as i64) as usize][cell],
            None => self.cell_fractions[cell],
        })
    }

    pub fn ln_cell_mass(&self, k: i64, cell: usize) -> Result<f64> {
        Ok(self.ln_level_mass(k)? + self.cell_share(k, cell)?.ln())
    }

    fn check(&self) -> Result<StarConstants> {
        check_exponent(self.exponent)?;
        if !(self.declared_distortion.is_finite() && self.declared_distortion >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "distortion constant must be >= 1, got {}",
                self.declared_distortion
            )));
        }
        if self.window == 0 {
            return Err(Error::InvalidParameter("window must be positive".into()));
        }
        let fractions = &self.cell_fractions;
        let sum: f64 = fractions.iter().sum();
        if fractions.is_empty()
            || fractions.iter().any(|&p| !(p.is_finite() && p > 0.0))
            || (sum - 1.0).abs() > SUM_TOLERANCE
        {
            return Err(Error::CellFractions { sum });
        }

        let m = self.window as i64;
        for k in -m..=m {
            let ln = self.masses.ln_mass(k)?;
            if ln == f64::NEG_INFINITY {
                return Err(Error::NonPositiveMass { level: k, mass: 0.0 });
            }
        }

        let tolerance = 1.0 + SUM_TOLERANCE;
        let declared = self.declared_distortion;
        let mut distortion = 1.0_f64;
        if let Some(shares) = &self.cell_shares {
            for (row, level_shares) in shares.iter().enumerate() {
                let k = row as i64 - m;
                if level_shares.len() != fractions.len() {
                    return Err(Error::InvalidParameter(format!(
                        "level {k} has {} cells, expected {}",
                        level_shares.len(),
                        fractions.len()
                    )));
                }
                for (i, (&q, &p)) in level_shares.iter().zip(fractions).enumerate() {
                    let ratio = q / p;
                    if k == 0 && (ratio - 1.0).abs() > SUM_TOLERANCE {
                        return Err(Error::LevelZeroCells {
                            cell: i,
                            share: q,
                            expected: p,
                        });
                    }
                    if ratio > declared * tolerance || ratio.recip() > declared * tolerance {
                        return Err(Error::DistortionViolated {
                            level: k,
                            cell: i,
                            ratio,
                            declared,
                        });
                    }
                    distortion = distortion.max(ratio).max(ratio.recip());
                }
            }
        }

        let cells = self.cell_count();
        let mut c = 0.0_f64;
        let mut d = 0.0_f64;
        for k in -m..m {
            // rho_{k,i} / rho_{k+1,i} feeds c; its reciprocal feeds d.
            let level_ratio = self.masses.ratio(k, k + 1)?;
            for i in 0..cells {
                let share_ratio = self.cell_share(k, i)? / self.cell_share(k + 1, i)?;
                let r = level_ratio * share_ratio;
                c = c.max(r);
                d = d.max(r.recip());
            }
        }
        if !(c.is_finite() && d.is_finite()) {
            return Err(Error::InvalidParameter(
                "condition (star) constants are not finite".into(),
            ));
        }
        Ok(StarConstants { c, d, distortion })
    }
}

/// Converts absolute cell masses into shares of the level mass, checking the
/// sum rule on every level.
fn relative_shares(masses: &LevelMasses, rho: &[Vec<f64>], window: u64) -> Result<Vec<Vec<f64>>> {
    let expected_rows = 2 * window as usize + 1;
    if rho.len() != expected_rows {
        return Err(Error::InvalidParameter(format!(
            "cell mass table needs {expected_rows} levels, got {}",
            rho.len()
        )));
    }
    let m = window as i64;
    rho.iter()
        .enumerate()
        .map(|(row, cells)| {
            let k = row as i64 - m;
            let level = masses.mass(k)?;
            if let Some(&bad) = cells.iter().find(|&&v| !(v.is_finite() && v > 0.0)) {
                return Err(Error::NonPositiveMass { level: k, mass: bad });
            }
            let sum: f64 = cells.iter().sum();
            if (sum - level).abs() > SUM_TOLERANCE * level {
                return Err(Error::CellMassMismatch {
                    level: k,
                    sum,
                    expected: level,
                });
            }
            Ok(cells.iter().map(|&v| v / sum).collect())
        })
        .collect()
}

fn checked_shares(shares: &[Vec<f64>], window: u64) -> Result<Vec<Vec<f64>>> {
    let expected_rows = 2 * window as usize + 1;
    if shares.len() != expected_rows {
        return Err(Error::InvalidParameter(format!(
            "cell share table needs {expected_rows} levels, got {}",
            shares.len()
        )));
    }
    let m = window as i64;
    for (row, cells) in shares.iter().enumerate() {
        let k = row as i64 - m;
        if let Some(&bad) = cells.iter().find(|&&v| !(v.is_finite() && v > 0.0)) {
            return Err(Error::NonPositiveMass { level: k, mass: bad });
        }
        let sum: f64 = cells.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::CellMassMismatch {
                level: k,
                sum,
                expected: 1.0,
            });
        }
    }
    Ok(shares.to_vec())
}

/// Validates raw tower data and returns `(c, d, K_eff)`.
pub fn validate(spec: &TowerSpec) -> Result<StarConstants> {
    MeasureTower::new(spec.clone()).map(|t| t.star())
}
