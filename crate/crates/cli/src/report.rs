//! JSON reports. Keys are sorted and wall times go to a sidecar file, so a
//! report depends only on the configuration, the overrides and the crate
//! version.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::Context;
use crate::error::CliError;
use crate::runner::CheckRecord;

pub fn config_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn environment() -> Value {
    json!({
        "crate_version": env!("CARGO_PKG_VERSION"),
        "os": std::env::consts::OS,
        "arch": std::env::consts::ARCH,
    })
}

pub fn build(config_text: &str, ctx: &Context, records: &[CheckRecord]) -> Value {
    let passed = records.iter().all(|r| r.passed);
    json!({
        "config_sha256": config_hash(config_text),
        "environment": environment(),
        "seed": ctx.seed,
        "tolerance": ctx.tolerance,
        "group_order": ctx.group.order(),
        "model_dim": ctx.model.dim(),
        "checks": records.iter().map(CheckRecord::to_json).collect::<Vec<_>>(),
        "summary": {
            "total": records.len(),
            "failed": records.iter().filter(|r| !r.passed).count(),
            "passed": passed,
        },
    })
}

pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn timing_path(report: &Path) -> PathBuf {
    let mut name = report.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".timing.json");
    report.with_file_name(name)
}

pub fn timing(records: &[CheckRecord], times: &[Duration]) -> Value {
    let rows: Vec<Value> = records
        .iter()
        .zip(times)
        .enumerate()
        .map(|(i, (r, t))| json!({ "index": i, "name": r.name, "seconds": t.as_secs_f64() }))
        .collect();
    json!({ "checks": rows, "total_seconds": times.iter().map(Duration::as_secs_f64).sum::<f64>() })
}

pub fn write(path: &Path, report: &Value, timing: &Value) -> Result<(), CliError> {
    let io = |p: &Path, e: std::io::Error| CliError::Usage(format!("cannot write {}: {e}", p.display()));
    std::fs::write(path, render(report)).map_err(|e| io(path, e))?;
    let tp = timing_path(path);
    std::fs::write(&tp, render(timing)).map_err(|e| io(&tp, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_name() {
        assert_eq!(timing_path(Path::new("out/r.json")), PathBuf::from("out/r.json.timing.json"));
    }

    #[test]
    fn keys_are_sorted() {
        let s = render(&json!({ "b": 1, "a": { "d": 2, "c": 3 } }));
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.find("\"c\"").unwrap() < s.find("\"d\"").unwrap());
    }
}
