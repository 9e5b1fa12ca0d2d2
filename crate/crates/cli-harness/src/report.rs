use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::CliError;

/// One verification record. Every check passes exactly when
/// `worst_residual <= threshold`; order checks store the shortfall below the
/// required order so the same rule applies.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub worst_residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, worst_residual: f64, threshold: f64) -> Self {
        let pass = worst_residual <= threshold;
        Self {
            name: name.into(),
            worst_residual,
            threshold,
            pass,
        }
    }
}

/// Suite report serialized as UTF-8 JSON. Field order is fixed by this
/// struct; reruns with the same seed are byte-identical except for
/// `elapsed_seconds`, which is the last line of the serialized form.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<(usize, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub errors: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<f64>>,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
    pub elapsed_seconds: f64,
}

impl Report {
    pub fn finish(mut self) -> Self {
        self.pass = self.checks.iter().all(|c| c.pass);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Write to `path`, or to stdout when no path is given.
    pub fn emit(&self, path: Option<&Path>) -> Result<(), CliError> {
        let json = self.to_json();
        match path {
            Some(p) => std::fs::write(p, json)
                .map_err(|e| CliError::Usage(format!("cannot write report {}: {e}", p.display()))),
            None => std::io::stdout()
                .write_all(json.as_bytes())
                .map_err(|e| CliError::Usage(format!("cannot write report to stdout: {e}"))),
        }
    }

    /// One human line per check.
    pub fn print_summary(&self) {
        for c in &self.checks {
            println!(
                "{:<44} {}  (worst {:.3e}, threshold {:.3e})",
                c.name,
                if c.pass { "PASS" } else { "FAIL" },
                c.worst_residual,
                c.threshold
            );
        }
        println!("overall: {}", if self.pass { "PASS" } else { "FAIL" });
    }
}

/// Accumulates worst residuals per named check, in registration order so the
/// report layout never depends on execution details.
pub struct CheckSet {
    records: Vec<(String, f64, f64)>,
}

impl CheckSet {
    pub fn new() -> Self {
        Self {
            records: Vec::new(),
        }
    }

    /// Declare a check with its threshold; idempotent.
    pub fn declare(&mut self, name: &str, threshold: f64) {
        if !self.records.iter().any(|(n, _, _)| n == name) {
            self.records.push((name.to_string(), 0.0, threshold));
        }
    }

    /// Record a residual observation for a declared check.
    pub fn observe(&mut self, name: &str, residual: f64) {
        let entry = self
            .records
            .iter_mut()
            .find(|(n, _, _)| n == name)
            .unwrap_or_else(|| panic!("check {name} was never declared"));
        if residual > entry.1 {
            entry.1 = residual;
        }
    }

    pub fn into_records(self) -> Vec<CheckRecord> {
        self.records
            .into_iter()
            .map(|(name, worst, threshold)| CheckRecord::new(name, worst, threshold))
            .collect()
    }
}

impl Default for CheckSet {
    fn default() -> Self {
        Self::new()
    }
}
