//! Report envelope, rendering and atomic file output.

use std::io::Write;
use std::path::Path;

use detpsi_core::report::{CheckResult, Summary, Verdict};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::run::RunConfig;
use crate::RunError;

/// Version of the report layout described in `docs/report-schema.md`.
pub const REPORT_SCHEMA_VERSION: u32 = detpsi_core::report::SCHEMA_VERSION;

/// A complete run report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: RunConfig,
    pub summary: Summary,
    pub checks: Vec<CheckResult>,
    /// Wall-clock time of the whole run in milliseconds.
    pub total_ms: f64,
}

/// The reproducible part of a report: everything except timings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictSection<'a> {
    pub schema_version: u32,
    pub config: &'a RunConfig,
    pub summary: Summary,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(config: RunConfig, checks: Vec<CheckResult>, total_ms: f64) -> Self {
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            summary: Summary::of(&checks),
            checks,
            total_ms,
        }
    }

    pub fn verdicts(&self) -> VerdictSection<'_> {
        VerdictSection {
            schema_version: self.schema_version,
            config: &self.config,
            summary: self.summary,
            checks: self.checks.iter().map(CheckResult::verdict_part).collect(),
        }
    }

    /// Serialized verdict section; identical runs give identical bytes.
    pub fn verdict_json(&self) -> String {
        serde_json::to_string_pretty(&self.verdicts()).expect("verdicts serialize")
    }

    /// Process exit code: 1 if any check failed, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.summary.all_ok() {
            0
        } else {
            1
        }
    }
}

/// One line per check followed by the summary.
pub fn render_report(report: &Report) -> String {
    let mut out = String::new();
    for c in &report.checks {
        let tag = match c.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::HypothesisNotMet => "N/A ",
        };
        out.push_str(&format!("{tag}  {:<22} {}", c.check, c.subject));
        if let Some(w) = &c.witness {
            out.push_str(&format!("  -- {w}"));
        }
        out.push('\n');
    }
    let s = report.summary;
    out.push_str(&format!(
        "summary: {} pass, {} fail, {} hypothesis-not-met ({} checks, {:.0} ms)\n",
        s.pass,
        s.fail,
        s.hypothesis_not_met,
        report.checks.len(),
        report.total_ms
    ));
    out
}

/// Writes `bytes` to `path` through a temporary file in the same directory
/// and an atomic rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    let io = |source| RunError::Io { path: path.display().to_string(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> Result<(), RunError> {
    let mut bytes =
        serde_json::to_vec_pretty(value).map_err(|source| RunError::Json { path: path.display().to_string(), source })?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, RunError> {
    let text = std::fs::read_to_string(path).map_err(|source| RunError::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|source| RunError::Json { path: path.display().to_string(), source })
}
