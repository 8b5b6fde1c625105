//! Report assembly and emission: plot-ready CSV tables and JSON reports,
//! rendered with locale-independent 17-significant-digit decimals so that
//! reruns with the same config are byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::HarnessError;

/// One fitted constant together with the method that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FittedConstant {
    pub name: String,
    pub value: f64,
    pub method: String,
}

/// A named scalar assertion evaluated by an experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    /// "<=" or ">=".
    pub cmp: String,
    pub passed: bool,
}

impl CheckLine {
    pub fn le(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            cmp: "<=".into(),
            passed: value <= threshold,
        }
    }

    pub fn ge(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            cmp: ">=".into(),
            passed: value >= threshold,
        }
    }
}

/// Experiment output: the echoed configuration, a numeric table, fitted
/// constants, and named checks. Everything serialized is deterministic
/// for a fixed config; the wall clock is kept out of the persisted bytes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub library_version: String,
    /// Sampling / RNG conventions baked into the run (point exclusion
    /// zones, increment law of the martingale sampler, fit methods).
    pub notes: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub fits: Vec<FittedConstant>,
    pub checks: Vec<CheckLine>,
    pub passed: bool,
    #[serde(skip)]
    pub wall_clock_s: f64,
}

impl ExperimentReport {
    pub fn new(config: ExperimentConfig) -> Self {
        Self {
            config,
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            notes: Vec::new(),
            columns: Vec::new(),
            rows: Vec::new(),
            fits: Vec::new(),
            checks: Vec::new(),
            passed: true,
            wall_clock_s: 0.0,
        }
    }

    pub fn push_fit(&mut self, name: &str, value: f64, method: &str) {
        self.fits.push(FittedConstant {
            name: name.into(),
            value,
            method: method.into(),
        });
    }

    pub fn push_check(&mut self, check: CheckLine) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn fit(&self, name: &str) -> Option<f64> {
        self.fits.iter().find(|f| f.name == name).map(|f| f.value)
    }

    pub fn check(&self, name: &str) -> Option<&CheckLine> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// The per-row table as CSV: header row, comma separators, '.' decimal
    /// marks, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(',');
                }
                out.push_str(&fmt_g17(*v));
                first = false;
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String, HarnessError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Write CSV and/or JSON to the configured paths.
    pub fn persist(&self) -> Result<(), HarnessError> {
        if let Some(path) = &self.config.output_path {
            fs::write(Path::new(path), self.to_csv())?;
        }
        if let Some(path) = &self.config.json_path {
            fs::write(Path::new(path), self.to_json()?)?;
        }
        Ok(())
    }

    /// Human-readable summary for standard output.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "experiment {:?}: {} rows, seed {}",
            self.config.experiment,
            self.rows.len(),
            self.config.seed
        );
        for f in &self.fits {
            let _ = writeln!(s, "  fit {} = {} [{}]", f.name, fmt_g17(f.value), f.method);
        }
        for c in &self.checks {
            let _ = writeln!(
                s,
                "  check {}: {} {} {} ... {}",
                c.name,
                fmt_g17(c.value),
                c.cmp,
                fmt_g17(c.threshold),
                if c.passed { "pass" } else { "FAIL" }
            );
        }
        let _ = writeln!(
            s,
            "  result: {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.wall_clock_s
        );
        s
    }
}

/// Locale-independent decimal rendering with 17 significant digits;
/// integers below 2^53 are rendered exactly without an exponent.
pub fn fmt_g17(x: f64) -> String {
    if x == x.trunc() && x.abs() < 9.0e15 && x.is_finite() {
        // -0.0 normalizes to 0 for stable output.
        if x == 0.0 {
            return "0".to_string();
        }
        return format!("{}", x as i64);
    }
    format!("{:.16e}", x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_formats() {
        assert_eq!(fmt_g17(0.0), "0");
        assert_eq!(fmt_g17(-0.0), "0");
        assert_eq!(fmt_g17(42.0), "42");
        assert_eq!(fmt_g17(16.0 * std::f64::consts::LN_2), "1.1090354888959125e1");
        let x = 0.1f64;
        let rendered = fmt_g17(x);
        assert_eq!(rendered.parse::<f64>().unwrap(), x);
    }
}
