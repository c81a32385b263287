//! The experiment configuration: one JSON document shared by every command.
//!
//! ```json
//! {
//!   "tower": { "profile": { "kind": "geometric", "ratio": 0.5 }, "window": 64 },
//!   "p": 1.0,
//!   "seed": 0,
//!   "criteria": { "N_list": [1, 2, 4, 8], "epsilon_list": [0.1, 0.01, 0.001], "horizon": 20000 },
//!   "orbit": { "vector": { "kind": "unit", "index": 0 }, "n_max": 2000 },
//!   "conjugacy": { "trials": 1000 },
//!   "sweep": { "profiles": ["geometric", "flat", "harmonic"], "seeds": 100 }
//! }
//! ```
//!
//! Exactly one of `tower` and `weights` describes the system. Sections a
//! command does not use are ignored.

use std::path::Path;
use std::sync::Arc;

use recurlab_core::generators::{Cells, Family, Profile, TowerRecipe};
use recurlab_core::{
    build_periodic_point, tower_from_profile, tower_from_weights, BilateralSequence, CriteriaConfig,
    MeasureTower, WeightSequence,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightsSection>,
    #[serde(default = "one")]
    pub p: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub criteria: CriteriaSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<OrbitSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugacy: Option<ConjugacySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

fn one() -> f64 {
    1.0
}

fn default_window() -> u64 {
    64
}

/// `CriteriaConfig` with the unicode spelling `ε_list` accepted as well.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriteriaSection {
    #[serde(rename = "N_list")]
    pub block_sizes: Vec<u64>,
    #[serde(rename = "epsilon_list", alias = "ε_list")]
    pub epsilons: Vec<f64>,
    pub horizon: u64,
    pub ratio_threshold: f64,
}

impl Default for CriteriaSection {
    fn default() -> Self {
        let d = CriteriaConfig::default();
        Self {
            block_sizes: d.block_sizes,
            epsilons: d.epsilons,
            horizon: d.horizon,
            ratio_threshold: d.ratio_threshold,
        }
    }
}

impl CriteriaSection {
    pub fn to_core(&self) -> CriteriaConfig {
        CriteriaConfig {
            block_sizes: self.block_sizes.clone(),
            epsilons: self.epsilons.clone(),
            horizon: self.horizon,
            ratio_threshold: self.ratio_threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSection {
    pub profile: Profile,
    #[serde(default = "default_window")]
    pub window: u64,
    #[serde(default)]
    pub cells: Cells,
    /// Declared distortion constant `K`.
    #[serde(default = "one", alias = "K")]
    pub distortion: f64,
    /// `mu(W)`.
    #[serde(default = "one")]
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightsSection {
    Constant {
        value: f64,
        #[serde(default = "default_window")]
        window: u64,
    },
    Split {
        nonpositive: f64,
        positive: f64,
        #[serde(default = "default_window")]
        window: u64,
    },
    /// `w_k` for `k = -M..=M`; the length fixes `M`.
    Table { values: Vec<f64> },
}

impl WeightsSection {
    pub fn build(&self) -> Result<WeightSequence, CliError> {
        Ok(match self {
            WeightsSection::Constant { value, window } => WeightSequence::constant(*value, *window)?,
            WeightsSection::Split {
                nonpositive,
                positive,
                window,
            } => WeightSequence::split(*nonpositive, *positive, *window)?,
            WeightsSection::Table { values } => {
                if values.len() % 2 == 0 {
                    return Err(CliError::Config(format!(
                        "weight table needs an odd number of entries, got {}",
                        values.len()
                    )));
                }
                WeightSequence::table(values.clone(), (values.len() as u64 - 1) / 2)?
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    /// `B_w` on sequences.
    #[default]
    Shift,
    /// `T_f` on tower functions; the vector is lifted level by level.
    Composition,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum VectorSpec {
    Unit {
        index: i64,
    },
    Entries {
        entries: Vec<(i64, f64)>,
    },
    /// `x_k = amplitude * ratio^|k|` for `|k| <= radius`.
    Geometric {
        ratio: f64,
        radius: u64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// The canonical periodic point of the shift, truncated to `|k| <= radius`.
    PeriodicPoint {
        period: u64,
        radius: u64,
        #[serde(default = "one")]
        amplitude: f64,
    },
}

impl VectorSpec {
    pub fn build(&self, weights: &WeightSequence, p: f64) -> Result<BilateralSequence, CliError> {
        let window = weights.window();
        Ok(match self {
            VectorSpec::Unit { index } => BilateralSequence::unit(*index, window.max(index.unsigned_abs()))?,
            VectorSpec::Entries { entries } => {
                let reach = entries.iter().map(|(k, _)| k.unsigned_abs()).max().unwrap_or(0);
                BilateralSequence::from_entries(entries.iter().copied(), window.max(reach))?
            }
            VectorSpec::Geometric {
                ratio,
                radius,
                amplitude,
            } => {
                let r = *radius as i64;
                BilateralSequence::from_entries(
                    (-r..=r).map(|k| (k, amplitude * ratio.powi(k.unsigned_abs() as i32))),
                    window.max(*radius),
                )?
            }
            VectorSpec::PeriodicPoint {
                period,
                radius,
                amplitude,
            } => {
                let pp = build_periodic_point(weights, *period, *amplitude, *radius, p)?;
                if pp.representable_radius < *radius {
                    return Err(recurlab_core::Error::NonFinite {
                        index: pp.representable_radius as i64 + 1,
                    }
                    .into());
                }
                pp.point
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSection {
    pub vector: VectorSpec,
    #[serde(default)]
    pub operator: OperatorKind,
    /// Absolute radii; defaults to `{0.5, 0.1, 0.01} * ||x||`.
    #[serde(default, alias = "δ_grid", skip_serializing_if = "Option::is_none")]
    pub delta_grid: Option<Vec<f64>>,
    #[serde(default = "default_n_max")]
    pub n_max: u64,
    #[serde(default = "default_density_threshold")]
    pub density_threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_start: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_lengths: Option<Vec<u64>>,
    /// Only indices or levels `|k| <= radius` enter the distances.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<u64>,
}

fn default_n_max() -> u64 {
    2000
}

fn default_density_threshold() -> f64 {
    0.01
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConjugacySection {
    /// Random `(tower, phi)` semiconjugacy trials.
    pub trials: u64,
    /// Random `y` lift round trips; defaults to `trials`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lift_trials: Option<u64>,
    /// Powers `n = 1..=n_steps` checked per trial.
    pub n_steps: u64,
    pub tolerance: f64,
    pub lift_tolerance: f64,
    pub profiles: Vec<Family>,
    pub window: u64,
    pub max_cells: usize,
    /// Upper end of the distortion constants drawn for random_distorted.
    pub max_distortion: f64,
}

impl Default for ConjugacySection {
    fn default() -> Self {
        Self {
            trials: 1000,
            lift_trials: None,
            n_steps: 8,
            tolerance: 1e-9,
            lift_tolerance: 1e-12,
            profiles: Family::ALL.to_vec(),
            window: 64,
            max_cells: 4,
            max_distortion: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Seeds {
    Count(u64),
    List(Vec<u64>),
}

impl Seeds {
    /// Trial seeds derived from the run seed.
    pub fn expand(&self, base: u64) -> Vec<u64> {
        match self {
            Seeds::Count(n) => (0..*n).map(|i| base.wrapping_add(i)).collect(),
            Seeds::List(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub profiles: Vec<Family>,
    pub seeds: Seeds,
    pub window: u64,
    pub max_cells: usize,
    pub max_distortion: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            profiles: vec![Family::Geometric, Family::Flat, Family::Harmonic],
            seeds: Seeds::Count(100),
            window: 64,
            max_cells: 1,
            max_distortion: 1.0,
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// The system under study as a tower. A `weights` section is routed
    /// through the one-cell tower with `mu(W) = 1`.
    pub fn build_tower(&self) -> Result<Arc<MeasureTower>, CliError> {
        match (&self.tower, &self.weights) {
            (Some(t), None) => Ok(tower_from_profile(&TowerRecipe {
                profile: t.profile.clone(),
                window: t.window,
                cells: t.cells.clone(),
                distortion: t.distortion,
                exponent: self.p,
                scale: t.scale,
                seed: self.seed,
            })?),
            (None, Some(w)) => Ok(tower_from_weights(Arc::new(w.build()?), self.p, 1.0)?),
            (Some(_), Some(_)) => Err(CliError::Config(
                "give either a tower or a weights section, not both".into(),
            )),
            (None, None) => Err(CliError::Config("missing tower or weights section".into())),
        }
    }

    /// The shift weights: given directly, or derived from the tower.
    pub fn build_weights(&self) -> Result<Arc<WeightSequence>, CliError> {
        match &self.weights {
            Some(w) if self.tower.is_none() => Ok(Arc::new(w.build()?)),
            _ => Ok(Arc::new(recurlab_core::derive_weights(&*self.build_tower()?)?)),
        }
    }
}
