//! Batch front end for recurlab: reads one JSON config, runs a command and
//! writes a JSON report (plus CSV plot data for orbits) into an output
//! directory.
//!
//! Exit codes: 0 when the run completed (whatever the verdicts), 2 for
//! configuration or validation errors, 3 for window/domain errors, 4 when a
//! checked invariant is violated.

pub mod classify;
pub mod config;
pub mod conjugacy;
pub mod orbit;
pub mod report;
pub mod sweep;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

pub use config::Config;
pub use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] recurlab_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_domain() => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Classify,
    ConjugacyCheck,
    Orbit,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::ConjugacyCheck => "conjugacy-check",
            Command::Orbit => "orbit",
            Command::Sweep => "sweep",
        }
    }
}

/// Command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    /// Criteria horizon; for `orbit` it replaces `n_max`.
    pub horizon: Option<u64>,
}

impl Overrides {
    pub fn apply(&self, command: Command, config: &mut Config) {
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(h) = self.horizon {
            config.criteria.horizon = h;
            if let (Command::Orbit, Some(orbit)) = (command, config.orbit.as_mut()) {
                orbit.n_max = h;
            }
        }
    }
}

/// A finished command: its report body, extra files to write next to the
/// report, and any invariant violations found on the way.
pub struct Output<B> {
    pub body: B,
    pub files: Vec<(String, String)>,
    pub violations: Vec<String>,
}

impl<B> Output<B> {
    pub fn new(body: B) -> Self {
        Self {
            body,
            files: Vec::new(),
            violations: Vec::new(),
        }
    }
}

/// What `run` wrote, and the exit code it implies.
#[derive(Debug)]
pub struct Outcome {
    pub report_path: PathBuf,
    pub files: Vec<PathBuf>,
    pub violations: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.violations.is_empty() {
            0
        } else {
            4
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn finish<B: Serialize>(
    command: Command,
    out_dir: &Path,
    started: Instant,
    output: Output<B>,
) -> Result<Outcome, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let report = Report::new(command.name(), started.elapsed(), &output.body)?;
    let report_path = out_dir.join(format!("{}.json", command.name()));
    write_file(&report_path, &report.to_json()?)?;
    let mut files = Vec::new();
    for (name, contents) in &output.files {
        let path = out_dir.join(name);
        write_file(&path, contents)?;
        files.push(path);
    }
    Ok(Outcome {
        report_path,
        files,
        violations: output.violations,
    })
}

/// Runs `command` on an already parsed config.
pub fn run_config(
    command: Command,
    mut config: Config,
    overrides: &Overrides,
    out_dir: &Path,
) -> Result<Outcome, CliError> {
    let started = Instant::now();
    overrides.apply(command, &mut config);
    match command {
        Command::Classify => finish(command, out_dir, started, classify::cmd_classify(&config)?),
        Command::ConjugacyCheck => finish(
            command,
            out_dir,
            started,
            conjugacy::cmd_conjugacy_check(&config)?,
        ),
        Command::Orbit => finish(command, out_dir, started, orbit::cmd_orbit(&config)?),
        Command::Sweep => finish(command, out_dir, started, sweep::cmd_sweep(&config)?),
    }
}

/// Loads the config at `config_path` and runs `command`.
pub fn run(
    command: Command,
    config_path: &Path,
    overrides: &Overrides,
    out_dir: &Path,
) -> Result<Outcome, CliError> {
    run_config(command, Config::load(config_path)?, overrides, out_dir)
}
