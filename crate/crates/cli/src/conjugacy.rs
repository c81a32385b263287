//! Randomized checks of the factor relation `Pi o T_f = B_w o Pi`, of the
//! lift as an isometric right inverse of `Pi`, and of `||Pi|| <= K^(1/p)`.

use rayon::prelude::*;
use recurlab_core::conjugacy::factor_norm_ratio;
use recurlab_core::generators::{random_sequence, random_span, random_tower_function, rng, sample_recipe};
use recurlab_core::{check_semiconjugacy, factor_map, lift, tower_from_profile, Family, SampleBounds};
use serde::Serialize;

use crate::config::{Config, ConjugacySection};
use crate::{CliError, Output};

/// Offset separating the lift trial seeds from the semiconjugacy ones.
const LIFT_STREAM: u64 = 0x6c69_6674;

/// Levels a random test function may occupy, on either side of its span.
const MAX_SPAN: u64 = 16;

#[derive(Debug, Clone, Serialize)]
pub struct FamilyStats {
    pub family: Family,
    pub trials: u64,
    pub max_relative_residual: f64,
    /// Largest `||Pi(phi)|| / ||phi||` seen.
    pub max_norm_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SemiconjugacySummary {
    pub trials: u64,
    pub n_steps: u64,
    pub tolerance: f64,
    pub max_residual: f64,
    /// `max residual / max(1, ||phi||)`.
    pub max_relative_residual: f64,
    pub failures: u64,
    /// Trials where `||Pi(phi)|| / ||phi||` exceeded `K_eff^(1/p)`.
    pub norm_bound_failures: u64,
    pub per_family: Vec<FamilyStats>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftSummary {
    pub trials: u64,
    pub tolerance: f64,
    /// `max | ||lift(y)|| - ||y|| | / ||y||`.
    pub max_norm_error: f64,
    /// `max ||Pi(lift(y)) - y|| / ||y||`.
    pub max_roundtrip_error: f64,
    pub failures: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugacyBody {
    pub config: Config,
    pub seed: u64,
    pub semiconjugacy: SemiconjugacySummary,
    pub lift: LiftSummary,
}

struct Trial {
    family: Family,
    residual: f64,
    relative: f64,
    passed: bool,
    norm_ratio: Option<f64>,
    norm_bound: f64,
}

fn bounds(section: &ConjugacySection, p: f64) -> SampleBounds {
    SampleBounds {
        window: section.window,
        max_cells: section.max_cells,
        max_distortion: section.max_distortion,
        exponent: p,
    }
}

fn semiconjugacy_trial(section: &ConjugacySection, p: f64, seed: u64) -> Result<Trial, CliError> {
    let mut rng = rng(seed);
    let family = section.profiles[(seed % section.profiles.len() as u64) as usize];
    let recipe = sample_recipe(family, &mut rng, &bounds(section, p));
    let tower = tower_from_profile(&recipe)?;
    let m = section.window as i64;
    let (lo, hi) = random_span(&mut rng, -m + section.n_steps as i64, m, MAX_SPAN);
    let phi = random_tower_function(&mut rng, &tower, lo, hi)?;
    let report = check_semiconjugacy(&tower, &phi, section.n_steps, section.tolerance)?;
    let scale = phi.p_norm(p)?.max(1.0);
    Ok(Trial {
        family,
        residual: report.max_residual,
        relative: report.max_residual / scale,
        passed: report.passed,
        norm_ratio: factor_norm_ratio(&tower, &phi)?,
        norm_bound: tower.star().distortion.powf(1.0 / p),
    })
}

/// `(norm error, round-trip error)` of one lift.
fn lift_trial(section: &ConjugacySection, p: f64, seed: u64) -> Result<(f64, f64), CliError> {
    let mut rng = rng(seed);
    let family = section.profiles[(seed % section.profiles.len() as u64) as usize];
    let tower = tower_from_profile(&sample_recipe(family, &mut rng, &bounds(section, p)))?;
    let m = section.window as i64;
    let (lo, hi) = random_span(&mut rng, -m, m, MAX_SPAN);
    let y = random_sequence(&mut rng, lo, hi, section.window)?;
    let norm = y.p_norm(p)?;
    if norm == 0.0 {
        return Ok((0.0, 0.0));
    }
    let lifted = lift(&tower, &y)?;
    let norm_error = (lifted.p_norm(p)? - norm).abs() / norm;
    let back = factor_map(&tower, &lifted)?;
    Ok((norm_error, (&back - &y).p_norm(p)? / norm))
}

pub fn cmd_conjugacy_check(config: &Config) -> Result<Output<ConjugacyBody>, CliError> {
    let section = config.conjugacy.clone().unwrap_or_default();
    if section.trials == 0 {
        return Err(CliError::Config("conjugacy.trials must be at least 1".into()));
    }
    if section.profiles.is_empty() {
        return Err(CliError::Config("conjugacy.profiles is empty".into()));
    }
    if section.n_steps == 0 || section.n_steps >= 2 * section.window {
        return Err(CliError::Config(format!(
            "conjugacy.n_steps must lie in [1, {}]",
            2 * section.window - 1
        )));
    }
    let p = config.p;
    let base = config.seed;

    let trials = (0..section.trials)
        .into_par_iter()
        .map(|i| semiconjugacy_trial(&section, p, base.wrapping_add(i)))
        .collect::<Result<Vec<_>, _>>()?;
    let lift_count = section.lift_trials.unwrap_or(section.trials);
    let lifts = (0..lift_count)
        .into_par_iter()
        .map(|i| lift_trial(&section, p, base.wrapping_add(LIFT_STREAM).wrapping_add(i)))
        .collect::<Result<Vec<_>, _>>()?;

    let tolerance = 1.0 + 1e-12;
    let norm_bound_failures = trials
        .iter()
        .filter(|t| t.norm_ratio.is_some_and(|r| r > t.norm_bound * tolerance))
        .count() as u64;
    let per_family = section
        .profiles
        .iter()
        .map(|&family| {
            let mine: Vec<&Trial> = trials.iter().filter(|t| t.family == family).collect();
            FamilyStats {
                family,
                trials: mine.len() as u64,
                max_relative_residual: mine.iter().map(|t| t.relative).fold(0.0, f64::max),
                max_norm_ratio: mine.iter().filter_map(|t| t.norm_ratio).fold(0.0, f64::max),
            }
        })
        .collect();
    let semiconjugacy = SemiconjugacySummary {
        trials: section.trials,
        n_steps: section.n_steps,
        tolerance: section.tolerance,
        max_residual: trials.iter().map(|t| t.residual).fold(0.0, f64::max),
        max_relative_residual: trials.iter().map(|t| t.relative).fold(0.0, f64::max),
        failures: trials.iter().filter(|t| !t.passed).count() as u64,
        norm_bound_failures,
        per_family,
    };
    let lift = LiftSummary {
        trials: lift_count,
        tolerance: section.lift_tolerance,
        max_norm_error: lifts.iter().map(|l| l.0).fold(0.0, f64::max),
        max_roundtrip_error: lifts.iter().map(|l| l.1).fold(0.0, f64::max),
        failures: lifts
            .iter()
            .filter(|l| l.0 > section.lift_tolerance || l.1 > section.lift_tolerance)
            .count() as u64,
    };

    let mut violations = Vec::new();
    if semiconjugacy.failures > 0 {
        violations.push(format!(
            "{} semiconjugacy trials above tolerance",
            semiconjugacy.failures
        ));
    }
    if norm_bound_failures > 0 {
        violations.push(format!(
            "{norm_bound_failures} trials with ||Pi(phi)|| > K^(1/p) ||phi||"
        ));
    }
    if lift.failures > 0 {
        violations.push(format!("{} lift round trips above tolerance", lift.failures));
    }
    let mut out = Output::new(ConjugacyBody {
        config: config.clone(),
        seed: base,
        semiconjugacy,
        lift,
    });
    out.violations = violations;
    Ok(out)
}
