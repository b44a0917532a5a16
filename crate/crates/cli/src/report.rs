//! Serializable reports. A report holds the effective configuration, the
//! command results and the named checks; it never holds timings, so equal
//! inputs give byte-identical files.

use crate::config::RunConfig;
use anyhow::{Context, Result};
use lgk_core::verify::{Check, Outcome, Section};
use serde::Serialize;
use serde_json::Value;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CheckOutcome {
    Residual { value: f64, tol: f64 },
    Count { got: usize, expected: usize },
    Span { dim_left: usize, dim_right: usize, residual: f64, tol: f64 },
    Flag { ok: bool },
    Skipped { reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    #[serde(flatten)]
    pub outcome: CheckOutcome,
}

impl From<&Check> for CheckReport {
    fn from(c: &Check) -> Self {
        let outcome = match &c.outcome {
            Outcome::Residual { value, tol } => CheckOutcome::Residual { value: *value, tol: *tol },
            Outcome::Count { got, expected } => CheckOutcome::Count { got: *got, expected: *expected },
            Outcome::Span { dim_left, dim_right, residual, tol } => {
                CheckOutcome::Span { dim_left: *dim_left, dim_right: *dim_right, residual: *residual, tol: *tol }
            }
            Outcome::Flag(ok) => CheckOutcome::Flag { ok: *ok },
            Outcome::Skipped(reason) => CheckOutcome::Skipped { reason: reason.clone() },
        };
        CheckReport { name: c.name.clone(), passed: c.passed(), outcome }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionReport {
    pub module: String,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

impl SectionReport {
    pub fn new(module: impl Into<String>, checks: &[Check]) -> Self {
        let checks: Vec<CheckReport> = checks.iter().map(CheckReport::from).collect();
        SectionReport { module: module.into(), passed: checks.iter().all(|c| c.passed), checks }
    }
}

impl From<&Section> for SectionReport {
    fn from(s: &Section) -> Self {
        SectionReport::new(s.module, &s.checks)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub config: RunConfig,
    pub results: Value,
    pub sections: Vec<SectionReport>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, config: &RunConfig, results: Value, sections: Vec<SectionReport>) -> Self {
        let passed = sections.iter().all(|s| s.passed);
        Report { command: command.into(), version: env!("CARGO_PKG_VERSION").into(), config: config.clone(), results, sections, passed }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Writes `config.json` and `report.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        std::fs::write(dir.join("config.json"), serde_json::to_string_pretty(&self.config)? + "\n")?;
        std::fs::write(dir.join("report.json"), self.to_json()?)?;
        Ok(())
    }

    /// One line per failing check, then the verdict.
    pub fn summary(&self) -> String {
        let total: usize = self.sections.iter().map(|s| s.checks.len()).sum();
        let mut out = String::new();
        for s in &self.sections {
            for c in s.checks.iter().filter(|c| !c.passed) {
                out += &format!("FAIL {}: {}\n", s.module, c.name);
            }
        }
        out += &format!("{}: {} checks, {}\n", self.command, total, if self.passed { "all passed" } else { "FAILED" });
        out
    }
}

/// Rows of `spectrum.csv`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRow {
    pub index: usize,
    pub eigenvalue: f64,
    pub residual: f64,
}

pub fn write_spectrum_csv(path: &Path, rows: &[SpectrumRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_serialization() {
        let c = CheckReport::from(&Check::residual("r", 1e-12, 1e-10));
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["kind"], "residual");
        assert_eq!(v["passed"], true);
        assert_eq!(v["tol"], 1e-10);
        let s = SectionReport::new("m", &[Check::count("c", 1, 2), Check::skipped("k", "why")]);
        assert!(!s.passed);
        assert_eq!(serde_json::to_value(&s.checks[1]).unwrap()["reason"], "why");
    }

    #[test]
    fn csv_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("spectrum.csv");
        write_spectrum_csv(&path, &[SpectrumRow { index: 0, eigenvalue: -0.5, residual: 1e-15 }]).unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        assert_eq!(text.lines().next(), Some("index,eigenvalue,residual"));
    }
}
