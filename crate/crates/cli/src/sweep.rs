//! Classify a family of random towers and cross-check the equivalences
//! between the six flags, plus agreement with the route through the
//! derived shift weights.

use rayon::prelude::*;
use recurlab_core::generators::{rng, sample_recipe};
use recurlab_core::{
    classify, classify_via_shift, tower_from_profile, Classification, Family, SampleBounds, Status,
    TowerRecipe,
};
use serde::Serialize;

use crate::config::{Config, SweepSection};
use crate::{CliError, Output};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftRoute {
    Agree,
    Disagree,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub index: usize,
    pub family: Family,
    pub seed: u64,
    pub recipe: TowerRecipe,
    /// Horizon actually used; table towers cap it at `M - max N`.
    pub horizon: u64,
    pub statuses: [Status; 6],
    pub hypercyclicity_witness: Option<u64>,
    pub invariant_violations: Vec<String>,
    pub shift_route: ShiftRoute,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub family: Family,
    pub trials: usize,
    pub invariant_pass: usize,
    pub invariant_fail: usize,
    pub shift_agree: usize,
    pub shift_disagree: usize,
    pub shift_skipped: usize,
    pub hypercyclic: usize,
    pub chaotic: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepBody {
    pub config: Config,
    pub seed: u64,
    pub horizon: u64,
    #[serde(rename = "N_list")]
    pub block_sizes: Vec<u64>,
    pub epsilon_list: Vec<f64>,
    pub ratio_threshold: f64,
    pub summary: Vec<SummaryRow>,
    pub total_trials: usize,
    pub total_invariant_violations: usize,
    pub trials: Vec<TrialRecord>,
}

/// The statuses plus the witness, which must coincide along both routes.
fn fingerprint(c: &Classification) -> ([Status; 6], Option<u64>) {
    (c.statuses(), c.hypercyclic.witness)
}

fn run_trial(
    config: &Config,
    section: &SweepSection,
    index: usize,
    family: Family,
    seed: u64,
) -> Result<TrialRecord, CliError> {
    let bounds = SampleBounds {
        window: section.window,
        max_cells: section.max_cells,
        max_distortion: section.max_distortion,
        exponent: config.p,
    };
    let recipe = sample_recipe(family, &mut rng(seed), &bounds);
    let tower = tower_from_profile(&recipe)?;
    let mut criteria = config.criteria.to_core();
    criteria.horizon = criteria.max_horizon(&tower).ok_or_else(|| {
        CliError::Config(format!(
            "sweep window {} is too small for N_list {:?}",
            section.window, criteria.block_sizes
        ))
    })?;
    let classification = classify(&tower, &criteria)?;

    let one_cell = tower.cell_count() == 1;
    let undistorted = tower.star().distortion == 1.0;
    let (shift_route, note) = if one_cell || undistorted {
        let shifted = classify_via_shift(&tower, &criteria)?;
        if fingerprint(&shifted) == fingerprint(&classification) {
            (ShiftRoute::Agree, None)
        } else {
            (
                ShiftRoute::Disagree,
                Some(format!(
                    "shift route gives {:?}, tower route {:?}",
                    fingerprint(&shifted),
                    fingerprint(&classification)
                )),
            )
        }
    } else {
        (
            ShiftRoute::Skipped,
            Some(format!(
                "distorted cells (K_eff = {}); the shift route is only compared at K = 1",
                tower.star().distortion
            )),
        )
    };

    Ok(TrialRecord {
        index,
        family,
        seed,
        recipe,
        horizon: criteria.horizon,
        statuses: classification.statuses(),
        hypercyclicity_witness: classification.hypercyclic.witness,
        invariant_violations: classification.invariant_violations(),
        shift_route,
        note,
    })
}

pub fn cmd_sweep(config: &Config) -> Result<Output<SweepBody>, CliError> {
    let section = config.sweep.clone().unwrap_or_default();
    if section.profiles.is_empty() {
        return Err(CliError::Config("sweep.profiles is empty".into()));
    }
    let seeds = section.seeds.expand(config.seed);
    if seeds.is_empty() {
        return Err(CliError::Config("sweep needs at least one seed".into()));
    }
    let jobs: Vec<(Family, u64)> = section
        .profiles
        .iter()
        .flat_map(|&f| seeds.iter().map(move |&s| (f, s)))
        .collect();
    let trials = jobs
        .par_iter()
        .enumerate()
        .map(|(index, &(family, seed))| run_trial(config, &section, index, family, seed))
        .collect::<Result<Vec<_>, _>>()?;

    let mut summary: Vec<SummaryRow> = Vec::new();
    for &family in &section.profiles {
        if summary.iter().any(|r| r.family == family) {
            continue;
        }
        let mine: Vec<&TrialRecord> = trials.iter().filter(|t| t.family == family).collect();
        let count = |route| mine.iter().filter(|t| t.shift_route == route).count();
        let fail = mine.iter().filter(|t| !t.invariant_violations.is_empty()).count();
        summary.push(SummaryRow {
            family,
            trials: mine.len(),
            invariant_pass: mine.len() - fail,
            invariant_fail: fail,
            shift_agree: count(ShiftRoute::Agree),
            shift_disagree: count(ShiftRoute::Disagree),
            shift_skipped: count(ShiftRoute::Skipped),
            hypercyclic: mine.iter().filter(|t| t.statuses[1].is_satisfied()).count(),
            chaotic: mine.iter().filter(|t| t.statuses[5].is_satisfied()).count(),
        });
    }

    let mut violations = Vec::new();
    for t in &trials {
        for v in &t.invariant_violations {
            violations.push(format!("trial {}: {v}", t.index));
        }
        if t.shift_route == ShiftRoute::Disagree {
            violations.push(format!("trial {}: shift route disagrees", t.index));
        }
    }
    let criteria = config.criteria.to_core();
    let mut out = Output::new(SweepBody {
        config: config.clone(),
        seed: config.seed,
        horizon: criteria.horizon,
        block_sizes: criteria.block_sizes,
        epsilon_list: criteria.epsilons,
        ratio_threshold: criteria.ratio_threshold,
        summary,
        total_trials: trials.len(),
        total_invariant_violations: trials.iter().map(|t| t.invariant_violations.len()).sum(),
        trials,
    });
    out.violations = violations;
    Ok(out)
}
