use recurlab_core::{classify, Classification};
use serde::Serialize;

use crate::config::Config;
use crate::report::TowerSummary;
use crate::{CliError, Output};

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyBody {
    pub config: Config,
    pub seed: u64,
    pub horizon: u64,
    #[serde(rename = "N_list")]
    pub block_sizes: Vec<u64>,
    pub epsilon_list: Vec<f64>,
    pub ratio_threshold: f64,
    pub tower: TowerSummary,
    pub classification: Classification,
    pub invariant_violations: Vec<String>,
}

/// Classifies the configured tower (or weights, through their tower).
pub fn cmd_classify(config: &Config) -> Result<Output<ClassifyBody>, CliError> {
    let tower = config.build_tower()?;
    let criteria = config.criteria.to_core();
    let classification = classify(&tower, &criteria)?;
    let violations = classification.invariant_violations();
    let mut out = Output::new(ClassifyBody {
        config: config.clone(),
        seed: config.seed,
        horizon: criteria.horizon,
        block_sizes: criteria.block_sizes,
        epsilon_list: criteria.epsilons,
        ratio_threshold: criteria.ratio_threshold,
        tower: TowerSummary::of(&tower),
        classification,
        invariant_violations: violations.clone(),
    });
    out.violations = violations;
    Ok(out)
}
