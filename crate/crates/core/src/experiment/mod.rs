//! Batch experiments: configuration, orchestration and result files.
//!
//! Every run writes its payload files, a `summary.json` with the pass/fail
//! checks and a `manifest.json` echoing the configuration. Only the manifest
//! carries a timestamp, so payloads and summaries of identical runs are
//! byte-identical.

mod checks;
mod config;
mod identities;
mod output;
mod runners;

pub use checks::{checks_for, CheckInfo, CheckResult, Outcome, CHECKS};
pub use config::{
    ConfigSources, CounterexampleConfig, ExpandConfig, ExperimentConfig, ExperimentName, FieldConfig, IdentitiesConfig,
    ProbeSectionConfig, ProjectConfig, QuadratureConfig, RunConfig, TsmConfig,
};
pub use output::OutputDir;
pub use runners::{build_field, coxeter_centers, is_reference_probe, type_function_centers};

use crate::constants::{frozen_constants, FrozenConstants};
use crate::error::Result;
use crate::exec::Exec;
use serde::Serialize;
use std::path::Path;

/// `σ_min` of the twisted sampling operator on `Σ₂ = ℝ ∪ iℝ` for the default
/// probe configuration: 9 points per half-line up to `|t| = 4`, 24
/// geometric radii on `[0.2, 6]`, `φ_{αβ}` with `α, β ≤ 10`, 256 circle nodes.
/// Frozen from the first run.
pub const TWISTED_SIGMA2_SIGMA_MIN: f64 = 2.943835480310629e-2;

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub schema_version: u32,
    pub experiment: ExperimentName,
    pub passed: bool,
    pub failing: Vec<&'static str>,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, Serialize)]
struct Versions {
    tsmlab: &'static str,
    parallel_feature: bool,
    arch: &'static str,
    os: &'static str,
}

#[derive(Debug, Clone, Serialize)]
struct Regression {
    twisted_sigma2_sigma_min: f64,
}

#[derive(Debug, Clone, Serialize)]
struct Manifest<'a> {
    schema_version: u32,
    experiment: ExperimentName,
    created_unix_seconds: u64,
    versions: Versions,
    config: &'a ExperimentConfig,
    frozen_constants: FrozenConstants,
    regression: Regression,
    payloads: &'a [String],
    summary: &'a str,
}

/// Runs the configured experiment into `cfg.run.out`.
pub fn run(cfg: &ExperimentConfig) -> Result<RunSummary> {
    run_into(cfg, cfg.out_dir())
}

/// Runs the configured experiment into `dir`.
pub fn run_into(cfg: &ExperimentConfig, dir: &Path) -> Result<RunSummary> {
    cfg.validate()?;
    let exec = if cfg.run.parallel { Exec::Parallel } else { Exec::Serial };
    let mut out = OutputDir::create(dir)?;
    let experiment = cfg.run.experiment;
    log::info!("running {experiment} into {}", dir.display());
    let checks = match experiment {
        ExperimentName::VerifyIdentities => runners::verify_identities(cfg, exec, &mut out)?,
        ExperimentName::TsmEval => runners::tsm_eval(cfg, exec, &mut out)?,
        ExperimentName::Project => runners::project(cfg, exec, &mut out)?,
        ExperimentName::ExpandQk => runners::expand_qk(cfg, exec, &mut out)?,
        ExperimentName::Counterexample => runners::counterexample(cfg, exec, &mut out)?,
        ExperimentName::Probe => runners::probe(cfg, exec, &mut out)?,
    };
    let failing: Vec<&'static str> = checks.iter().filter(|c| c.failed()).map(|c| c.id).collect();
    let summary = RunSummary { schema_version: 1, experiment, passed: failing.is_empty(), failing, checks };
    out.meta_json("summary.json", &summary)?;
    let created_unix_seconds =
        std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let manifest = Manifest {
        schema_version: 1,
        experiment,
        created_unix_seconds,
        versions: Versions {
            tsmlab: env!("CARGO_PKG_VERSION"),
            parallel_feature: cfg!(feature = "parallel"),
            arch: std::env::consts::ARCH,
            os: std::env::consts::OS,
        },
        config: cfg,
        frozen_constants: frozen_constants(),
        regression: Regression { twisted_sigma2_sigma_min: TWISTED_SIGMA2_SIGMA_MIN },
        payloads: out.files(),
        summary: "summary.json",
    };
    out.meta_json("manifest.json", &manifest)?;
    Ok(summary)
}
