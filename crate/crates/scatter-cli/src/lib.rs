//! Configuration-driven experiments and the acceptance runner.

pub mod acceptance;
pub mod config;
pub mod error;
pub mod experiments;
pub mod fit;
pub mod output;

use std::path::PathBuf;

use serde::Serialize;

pub use config::{Experiment, RunConfig};
pub use error::CliError;
use output::{sha256_hex, Artifacts, Cell};

/// Outcome of a successful run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub manifest: PathBuf,
    pub files: Vec<PathBuf>,
}

#[derive(Serialize)]
struct AcceptanceSummary<'a> {
    passed: bool,
    criteria: &'a [acceptance::CriterionReport],
}

/// Validates `cfg`, runs its experiment and writes the manifest.
///
/// An acceptance run that completes with failing criteria still writes its report
/// and manifest, then returns [`CliError::Acceptance`].
pub fn run(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    cfg.validate()?;
    let mut out = Artifacts::new(&cfg.output)?;
    let mut failed = Vec::new();
    match cfg.experiment {
        Experiment::Jost => experiments::jost(cfg, &mut out)?,
        Experiment::Spectrum => experiments::spectrum(cfg, &mut out)?,
        Experiment::Eigenfun => experiments::eigenfun(cfg, &mut out)?,
        Experiment::Waveop => experiments::waveop(cfg, &mut out)?,
        Experiment::Propagate => experiments::propagate(cfg, &mut out)?,
        Experiment::Sweep => experiments::sweep(cfg, &mut out)?,
        Experiment::Acceptance => {
            let reports = acceptance::run_all(|r| println!("{}", r.line()));
            let mut rows = Vec::new();
            for r in &reports {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                if !r.passed() {
                    failed.push(r.id.to_string());
                }
                for c in &r.checks {
                    rows.push(vec![
                        Cell::from(r.id as usize),
                        r.name.into(),
                        status.into(),
                        c.label.clone().into(),
                        c.value.into(),
                        c.relation.to_string().into(),
                        (if c.passed { "yes" } else { "no" }).into(),
                    ]);
                }
                if let Some(e) = &r.error {
                    rows.push(vec![Cell::from(r.id as usize), r.name.into(), status.into(), e.clone().into(), f64::NAN.into(), "".into(), "no".into()]);
                }
            }
            out.csv("acceptance.csv", &["criterion", "name", "status", "check", "value", "requirement", "passed"], &rows)?;
            out.json("acceptance.json", &AcceptanceSummary { passed: failed.is_empty(), criteria: &reports })?;
        }
    }
    let files = out.paths();
    let manifest = out.finish(cfg.experiment.name(), &sha256_hex(cfg.canonical_json().as_bytes()))?;
    if !failed.is_empty() {
        return Err(CliError::Acceptance(format!("criteria {} failed", failed.join(", "))));
    }
    Ok(RunSummary { manifest, files })
}
