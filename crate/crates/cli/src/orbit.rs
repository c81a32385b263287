//! Single-orbit experiments: distances, return sets and density evidence,
//! with one CSV of plot data per radius.

use std::fmt::Write as _;
use std::sync::Arc;

use recurlab_core::densities::WindowMaximum;
use recurlab_core::{
    frequent_recurrence_evidence, lift, CompositionOperator, Evidence, EvidenceConfig, EvidenceReport,
    HitSet, LinearOperator, WeightedShift,
};
use serde::Serialize;

use crate::config::{Config, OperatorKind, OrbitSection};
use crate::{CliError, Output};

pub const CSV_HEADER: &str = "n,distance,hit,running_lower_density,running_window_max_density";

#[derive(Debug, Clone, Serialize)]
pub struct DeltaSummary {
    pub delta: f64,
    pub csv: String,
    pub hits: usize,
    pub tail_hits: usize,
    pub lower_density: f64,
    pub upper_banach_density: f64,
    pub window_profile: Vec<WindowMaximum>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitBody {
    pub config: Config,
    pub seed: u64,
    pub operator: OperatorKind,
    pub n_max: u64,
    pub delta_grid: Vec<f64>,
    pub radius: Option<u64>,
    pub tail_start: u64,
    pub window_lengths: Vec<u64>,
    pub density_threshold: f64,
    pub norm: f64,
    pub evidence: Evidence,
    pub per_delta: Vec<DeltaSummary>,
}

/// `min a_m` over `m in [ceil(n/2), n]`, for every `n`; both ends of the
/// range only move right, so a monotone deque gives it in linear time.
fn running_lower(a: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len());
    let mut deque = std::collections::VecDeque::<usize>::new();
    for n in 1..=a.len() {
        while deque.back().is_some_and(|&j| a[j - 1] >= a[n - 1]) {
            deque.pop_back();
        }
        deque.push_back(n);
        let lo = n.div_ceil(2);
        while deque.front().is_some_and(|&j| j < lo) {
            deque.pop_front();
        }
        out.push(a[deque[0] - 1]);
    }
    out
}

/// Best hit rate over windows of length `min(length, n)` inside `[1, n]`.
fn running_window_max(counts: &[u64], length: usize) -> Vec<f64> {
    let n_max = counts.len() - 1;
    let mut out = Vec::with_capacity(n_max);
    let mut best = 0u64;
    for n in 1..=n_max {
        if n < length {
            out.push(counts[n] as f64 / n as f64);
        } else {
            best = best.max(counts[n] - counts[n - length]);
            out.push(best as f64 / length as f64);
        }
    }
    out
}

/// The plot data for one radius.
pub fn orbit_csv(distances: &[f64], hits: &HitSet, window_length: u64) -> String {
    let counts = hits.prefix_counts();
    let a: Vec<f64> = (1..counts.len()).map(|n| counts[n] as f64 / n as f64).collect();
    let lower = running_lower(&a);
    let windowed = running_window_max(&counts, window_length as usize);
    let mut csv = String::with_capacity(distances.len() * 48);
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for (j, d) in distances.iter().enumerate() {
        let n = j as u64 + 1;
        let hit = u8::from(counts[n as usize] > counts[n as usize - 1]);
        writeln!(csv, "{n},{d},{hit},{},{}", lower[j], windowed[j]).expect("writing to a String");
    }
    csv
}

fn evidence_config(section: &OrbitSection) -> EvidenceConfig {
    EvidenceConfig {
        delta_grid: section.delta_grid.clone(),
        n_max: section.n_max,
        density_threshold: section.density_threshold,
        tail_start: section.tail_start,
        window_lengths: section.window_lengths.clone(),
        radius: section.radius,
    }
}

fn run<O: LinearOperator>(
    op: &O,
    x: &O::Vector,
    section: &OrbitSection,
) -> Result<(EvidenceReport, f64), CliError> {
    let norm = op.norm(x)?;
    Ok((
        frequent_recurrence_evidence(op, x, &evidence_config(section))?,
        norm,
    ))
}

pub fn cmd_orbit(config: &Config) -> Result<Output<OrbitBody>, CliError> {
    let section = config
        .orbit
        .as_ref()
        .ok_or_else(|| CliError::Config("missing orbit section".into()))?;
    let weights = config.build_weights()?;
    let sequence = section.vector.build(&weights, config.p)?;
    let (report, norm) = match section.operator {
        OperatorKind::Shift => run(
            &WeightedShift::new(Arc::clone(&weights), config.p)?,
            &sequence,
            section,
        )?,
        OperatorKind::Composition => {
            let tower = config.build_tower()?;
            let phi = lift(&tower, &sequence)?;
            run(&CompositionOperator::new(tower), &phi, section)?
        }
    };

    let largest = *report.window_lengths.last().expect("nonempty window lengths");
    let mut files = Vec::new();
    let per_delta = report
        .per_delta
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let name = format!("orbit_delta_{i}.csv");
            files.push((name.clone(), orbit_csv(&report.distances, &d.hits, largest)));
            DeltaSummary {
                delta: d.delta,
                csv: name,
                hits: d.hits.len(),
                tail_hits: d.tail_hits,
                lower_density: d.lower.estimate,
                upper_banach_density: d.banach.estimate,
                window_profile: d.banach.profile.clone(),
            }
        })
        .collect();

    let mut out = Output::new(OrbitBody {
        config: config.clone(),
        seed: config.seed,
        operator: section.operator,
        n_max: report.n_max,
        delta_grid: report.per_delta.iter().map(|d| d.delta).collect(),
        radius: report.radius,
        tail_start: report.tail_start,
        window_lengths: report.window_lengths.clone(),
        density_threshold: report.density_threshold,
        norm,
        evidence: report.evidence,
        per_delta,
    });
    out.files = files;
    Ok(out)
}
