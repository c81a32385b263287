//! Report envelope and shared report fragments.
//!
//! Everything that varies between identical runs (wall time) lives in
//! `meta`; `body` is a pure function of config and seed.

use std::time::Duration;

use recurlab_core::{operator_norm_bound, MeasureTower, StarConstants};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub command: String,
    pub version: String,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub body: Value,
}

impl Report {
    pub fn new<B: Serialize>(command: &str, elapsed: Duration, body: &B) -> Result<Self, CliError> {
        Ok(Self {
            meta: Meta {
                command: command.to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                runtime_ms: elapsed.as_secs_f64() * 1e3,
            },
            body: serde_json::to_value(body).map_err(json_error)?,
        })
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self).map_err(json_error)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(json_error)
    }
}

fn json_error(e: serde_json::Error) -> CliError {
    CliError::Config(format!("cannot encode report: {e}"))
}

/// The numbers a reader needs to judge a tower without rebuilding it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerSummary {
    pub window: u64,
    pub extends: bool,
    pub exponent: f64,
    pub base_mass: f64,
    pub cell_fractions: Vec<f64>,
    pub declared_distortion: f64,
    pub star: StarConstants,
    /// `(c^(1/p), d^(1/p))`.
    pub norm_bounds: (f64, f64),
}

impl TowerSummary {
    pub fn of(tower: &MeasureTower) -> Self {
        Self {
            window: tower.window(),
            extends: tower.extends(),
            exponent: tower.exponent(),
            base_mass: tower.base_mass(),
            cell_fractions: tower.cell_fractions().to_vec(),
            declared_distortion: tower.declared_distortion(),
            star: tower.star(),
            norm_bounds: operator_norm_bound(tower),
        }
    }
}
