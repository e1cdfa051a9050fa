//! Configuration, orchestration and reporting behind the `gkcheck` binary.

pub mod config;
pub mod error;
pub mod explain;
pub mod report;
pub mod runner;

use std::path::Path;
use std::time::Duration;

use serde_json::Value;

pub use config::{Check, Context, Overrides, SuiteConfig};
pub use error::CliError;
pub use runner::CheckRecord;

pub const THREADS_ENV: &str = "GKERNEL_THREADS";

pub struct SuiteRun {
    pub records: Vec<CheckRecord>,
    pub times: Vec<Duration>,
    pub report: Value,
}

impl SuiteRun {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    pub fn rendered(&self) -> String {
        report::render(&self.report)
    }

    pub fn timing(&self) -> Value {
        report::timing(&self.records, &self.times)
    }
}

/// Thread count from the environment; unset or empty means the rayon default.
pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .map(Some)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        _ => Ok(None),
    }
}

pub fn load(path: &Path, ov: Overrides) -> Result<(String, Context), CliError> {
    let (text, cfg) = config::read(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let ctx = cfg.resolve(&text, base, ov).map_err(|e| e.in_file(path))?;
    Ok((text, ctx))
}

/// Loads a configuration and runs its checks.
pub fn run_suite(path: &Path, ov: Overrides, threads: Option<usize>) -> Result<SuiteRun, CliError> {
    let (text, ctx) = load(path, ov)?;
    let results = runner::run_all(&ctx, threads)?;
    let (records, times): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let report = report::build(&text, &ctx, &records);
    Ok(SuiteRun { records, times, report })
}
