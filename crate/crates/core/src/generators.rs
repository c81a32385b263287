//! Tower and vector generators. All randomness flows from an explicit seed
//! through ChaCha8, so the same seed reproduces the same objects on every
//! platform.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::TowerFunction;
use crate::sequence::BilateralSequence;
use crate::tower::{LevelProfile, MeasureTower, TowerSpec};
use crate::weights::WeightSequence;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    Geometric {
        ratio: f64,
    },
    Flat,
    Harmonic,
    /// Absolute level masses on `[-M, M]`.
    Custom {
        masses: Vec<f64>,
    },
    /// Closed-form level masses with cell shares perturbed at random within
    /// the declared distortion constant.
    RandomDistorted {
        levels: BaseLevels,
    },
}

/// Level profiles a random_distorted tower can sit on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseLevels {
    Geometric { ratio: f64 },
    Flat,
    Harmonic,
}

fn check_ratio(ratio: f64) -> Result<()> {
    if ratio > 0.0 && ratio < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "geometric ratio must lie in (0, 1), got {ratio}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cells {
    Uniform { count: usize },
    Fractions { fractions: Vec<f64> },
    Random { count: usize },
}

impl Default for Cells {
    fn default() -> Self {
        Cells::Uniform { count: 1 }
    }
}

/// Everything needed to build a tower from a named profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerRecipe {
    pub profile: Profile,
    pub window: u64,
    #[serde(default)]
    pub cells: Cells,
    #[serde(default = "one")]
    pub distortion: f64,
    #[serde(default = "one")]
    pub exponent: f64,
    /// `mu(W)`; ignored by `custom`.
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> f64 {
    1.0
}

impl TowerRecipe {
    pub fn new(profile: Profile, window: u64) -> Self {
        Self {
            profile,
            window,
            cells: Cells::default(),
            distortion: 1.0,
            exponent: 1.0,
            scale: 1.0,
            seed: 0,
        }
    }
}

fn cell_fractions(cells: &Cells, rng: &mut SeededRng) -> Result<Vec<f64>> {
    match cells {
        Cells::Uniform { count } | Cells::Random { count } if *count == 0 => {
            Err(Error::InvalidParameter("a tower needs at least one cell".into()))
        }
        Cells::Uniform { count } => Ok(vec![1.0 / *count as f64; *count]),
        Cells::Fractions { fractions } => Ok(fractions.clone()),
        Cells::Random { count } => {
            let raw: Vec<f64> = (0..*count).map(|_| rng.gen_range(0.5..1.5)).collect();
            let sum: f64 = raw.iter().sum();
            Ok(raw.into_iter().map(|v| v / sum).collect())
        }
    }
}

/// Shares `p_i u_i / sum_j p_j u_j` with `ln u_i` uniform in
/// `[-ln K / 2, ln K / 2]`, so every share ratio stays within `[1/K, K]`.
/// Level 0 keeps the fractions `p_i`.
fn random_shares(window: u64, fractions: &[f64], distortion: f64, rng: &mut SeededRng) -> Vec<Vec<f64>> {
    let m = window as usize;
    let half = distortion.ln() / 2.0;
    (0..=2 * m)
        .map(|row| {
            if row == m {
                return fractions.to_vec();
            }
            let weighted: Vec<f64> = fractions
                .iter()
                .map(|p| p * rng.gen_range(-half..=half).exp())
                .collect();
            let sum: f64 = weighted.iter().sum();
            weighted.iter().map(|v| v / sum).collect()
        })
        .collect()
}

/// Tower families for randomized experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Geometric,
    Flat,
    Harmonic,
    RandomDistorted,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Geometric,
        Family::Flat,
        Family::Harmonic,
        Family::RandomDistorted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Geometric => "geometric",
            Family::Flat => "flat",
            Family::Harmonic => "harmonic",
            Family::RandomDistorted => "random_distorted",
        }
    }
}

/// Ranges for [`sample_recipe`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleBounds {
    pub window: u64,
    pub max_cells: usize,
    pub max_distortion: f64,
    pub exponent: f64,
}

/// Draws a member of `family`: geometric ratios in `[0.3, 0.95]`, `mu(W)` in
/// `[0.25, 1]`, `1..=max_cells` random cells, and for random_distorted a
/// distortion constant in `[1, max_distortion]`.
pub fn sample_recipe(family: Family, rng: &mut SeededRng, bounds: &SampleBounds) -> TowerRecipe {
    let profile = match family {
        Family::Geometric => Profile::Geometric {
            ratio: rng.gen_range(0.3..=0.95),
        },
        Family::Flat => Profile::Flat,
        Family::Harmonic => Profile::Harmonic,
        Family::RandomDistorted => Profile::RandomDistorted {
            levels: match rng.gen_range(0..3) {
                0 => BaseLevels::Geometric {
                    ratio: rng.gen_range(0.3..=0.95),
                },
                1 => BaseLevels::Flat,
                _ => BaseLevels::Harmonic,
            },
        },
    };
    let count = rng.gen_range(1..=bounds.max_cells.max(1));
    let distortion = if family == Family::RandomDistorted && bounds.max_distortion > 1.0 {
        rng.gen_range(1.0..=bounds.max_distortion)
    } else {
        1.0
    };
    TowerRecipe {
        profile,
        window: bounds.window,
        cells: if count == 1 {
            Cells::Uniform { count: 1 }
        } else {
            Cells::Random { count }
        },
        distortion,
        exponent: bounds.exponent,
        scale: rng.gen_range(0.25..=1.0),
        seed: rng.gen(),
    }
}

/// A random index range `lo..=hi` inside `[min, max]` of width at most `max_width`.
pub fn random_span(rng: &mut SeededRng, min: i64, max: i64, max_width: u64) -> (i64, i64) {
    let lo = rng.gen_range(min..=max);
    let hi = (lo + rng.gen_range(0..=max_width as i64)).min(max);
    (lo, hi)
}

/// Builds and validates a tower from a recipe. Deterministic in `seed`.
pub fn tower_from_profile(recipe: &TowerRecipe) -> Result<Arc<MeasureTower>> {
    let mut rng = rng(recipe.seed);
    let fractions = cell_fractions(&recipe.cells, &mut rng)?;
    let (levels, cell_shares) = match &recipe.profile {
        Profile::Geometric { ratio } => {
            check_ratio(*ratio)?;
            (LevelProfile::Geometric { ratio: *ratio }, None)
        }
        Profile::Flat => (LevelProfile::Flat, None),
        Profile::Harmonic => (LevelProfile::Harmonic, None),
        Profile::Custom { masses } => (LevelProfile::Table(masses.clone()), None),
        Profile::RandomDistorted { levels } => {
            if !(recipe.distortion.is_finite() && recipe.distortion >= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "distortion constant must be >= 1, got {}",
                    recipe.distortion
                )));
            }
            let levels = match levels {
                BaseLevels::Geometric { ratio } => {
                    check_ratio(*ratio)?;
                    LevelProfile::Geometric { ratio: *ratio }
                }
                BaseLevels::Flat => LevelProfile::Flat,
                BaseLevels::Harmonic => LevelProfile::Harmonic,
            };
            let shares = (recipe.distortion > 1.0 && fractions.len() > 1)
                .then(|| random_shares(recipe.window, &fractions, recipe.distortion, &mut rng));
            (levels, shares)
        }
    };
    MeasureTower::new(TowerSpec {
        window: recipe.window,
        levels,
        scale: recipe.scale,
        cell_fractions: fractions,
        cell_masses: None,
        cell_shares,
        distortion: recipe.distortion,
        exponent: recipe.exponent,
    })
}

/// The one-cell tower whose derived weights are `w`, with `mu(W) = base_mass`.
pub fn tower_from_weights(w: Arc<WeightSequence>, p: f64, base_mass: f64) -> Result<Arc<MeasureTower>> {
    let window = w.window();
    let mut spec = TowerSpec::simple(LevelProfile::Weights { weights: w, p }, window, p);
    spec.scale = base_mass;
    MeasureTower::new(spec)
}

/// Weights drawn log-uniformly from `[lo, hi]` on the window.
pub fn random_weights(rng: &mut SeededRng, window: u64, lo: f64, hi: f64) -> Result<WeightSequence> {
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return Err(Error::InvalidParameter(format!("bad weight range [{lo}, {hi}]")));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let values = (0..2 * window + 1)
        .map(|_| if a == b { lo } else { rng.gen_range(a..=b).exp() })
        .collect();
    WeightSequence::table(values, window)
}

/// Entries uniform in `[-1, 1]` on the indices `lo..=hi`.
pub fn random_sequence(rng: &mut SeededRng, lo: i64, hi: i64, window: u64) -> Result<BilateralSequence> {
    BilateralSequence::from_entries((lo..=hi).map(|k| (k, rng.gen_range(-1.0..=1.0))), window)
}

/// Coefficients uniform in `[-1, 1]` on every cell of the levels `lo..=hi`.
pub fn random_tower_function(
    rng: &mut SeededRng,
    tower: &Arc<MeasureTower>,
    lo: i64,
    hi: i64,
) -> Result<TowerFunction> {
    let cells = tower.cell_count();
    let coefficients: Vec<((i64, usize), f64)> = (lo..=hi)
        .flat_map(|k| (0..cells).map(move |i| (k, i)))
        .map(|key| (key, rng.gen_range(-1.0..=1.0)))
        .collect();
    TowerFunction::new(tower, coefficients)
}
