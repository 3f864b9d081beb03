//! Machine-readable run reports for the verification suites.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub suite: String,
    pub seed: u64,
    pub params: Vec<(String, String)>,
    pub case_count: usize,
    pub pass_count: usize,
    pub failures: Vec<FailureRecord>,
    pub notes: Vec<String>,
    pub timing_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct FailureRecord {
    pub case: String,
    pub detail: String,
}

pub struct ReportBuilder {
    report: RunReport,
    started: Instant,
}

impl ReportBuilder {
    pub fn new(suite: impl Into<String>, seed: u64) -> Self {
        ReportBuilder {
            report: RunReport {
                schema: 1,
                suite: suite.into(),
                seed,
                params: vec![],
                case_count: 0,
                pass_count: 0,
                failures: vec![],
                notes: vec![],
                timing_ms: 0,
            },
            started: Instant::now(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.report.params.push((key.into(), value.to_string()));
        self
    }

    pub fn pass(&mut self) {
        self.report.case_count += 1;
        self.report.pass_count += 1;
    }

    pub fn fail(&mut self, case: impl Into<String>, detail: impl Into<String>) {
        self.report.case_count += 1;
        self.report.failures.push(FailureRecord { case: case.into(), detail: detail.into() });
    }

    pub fn case(&mut self, case: impl Into<String>, outcome: std::result::Result<(), String>) {
        match outcome {
            Ok(()) => self.pass(),
            Err(detail) => self.fail(case, detail),
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.report.notes.push(text.into());
    }

    pub fn finish(mut self) -> RunReport {
        self.report.timing_ms = self.started.elapsed().as_millis();
        self.report
    }
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.case_count > 0
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {}: {}/{} cases pass ({} ms, seed {})",
            self.suite, self.pass_count, self.case_count, self.timing_ms, self.seed
        )?;
        for (k, v) in &self.params {
            writeln!(f, "  param {k} = {v}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        for fail in &self.failures {
            writeln!(f, "  FAIL {}: {}", fail.case, fail.detail)?;
        }
        Ok(())
    }
}
