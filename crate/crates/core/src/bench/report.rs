//! Run summaries, CSV tables and artifact writing.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Float with 17 significant digits.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

/// Comma-separated table with a header row.
#[derive(Clone, Debug, Default)]
pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push_f(&mut self, vals: &[f64]) {
        self.rows.push(vals.iter().map(|&v| fmt_f(v)).collect());
    }

    pub fn push(&mut self, vals: Vec<String>) {
        self.rows.push(vals);
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join(","));
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CriterionResult {
    pub name: String,
    pub value: f64,
    /// Human-readable bound, e.g. "<= 1e-8".
    pub threshold: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct Summary {
    pub benchmark: String,
    /// "pass", "fail" or "error".
    pub status: String,
    /// Failure category: config | geometry | solver | acceptance | io; empty on pass.
    pub category: String,
    #[serde(default)]
    pub message: String,
    #[serde(default)]
    pub runtime_s: f64,
    #[serde(default)]
    pub criteria: Vec<CriterionResult>,
    #[serde(default)]
    pub metrics: std::collections::BTreeMap<String, f64>,
}

impl Summary {
    pub fn new(benchmark: &str) -> Self {
        Self { benchmark: benchmark.into(), ..Default::default() }
    }

    pub fn check(&mut self, name: &str, value: f64, threshold: &str, pass: bool) {
        self.criteria.push(CriterionResult { name: name.into(), value, threshold: threshold.into(), pass: pass && value.is_finite() });
    }

    pub fn metric(&mut self, name: &str, value: f64) {
        self.metrics.insert(name.into(), value);
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    /// Set status from the criteria.
    pub fn finish(&mut self) {
        if self.criteria.iter().all(|c| c.pass) {
            self.status = "pass".into();
            self.category.clear();
        } else {
            self.status = "fail".into();
            self.category = "acceptance".into();
            let failed: Vec<&str> = self.criteria.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            self.message = format!("failed: {}", failed.join(", "));
        }
    }

    pub fn from_error(benchmark: &str, e: &Error) -> Self {
        Self { benchmark: benchmark.into(), status: "error".into(), category: e.category().into(), message: e.to_string(), ..Default::default() }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).unwrap_or_default()
    }
}

/// Collects named text artifacts of a run and writes them under an output directory.
#[derive(Clone, Debug, Default)]
pub struct Artifacts {
    pub files: Vec<(String, String)>,
}

impl Artifacts {
    pub fn add(&mut self, name: impl Into<String>, content: impl Into<String>) {
        self.files.push((name.into(), content.into()));
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|f| f.0 == name).map(|f| f.1.as_str())
    }

    pub fn write_all(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut out = Vec::new();
        for (name, content) in &self.files {
            let p = dir.join(name);
            std::fs::write(&p, content)?;
            out.push(p);
        }
        Ok(out)
    }
}

/// Least-squares slope of log(e) against log(h).
pub fn loglog_slope(h: &[f64], e: &[f64]) -> Result<f64> {
    if h.len() != e.len() || h.len() < 2 {
        return Err(Error::Config("slope needs at least two (h, e) pairs".into()));
    }
    if h.iter().chain(e).any(|&v| !(v > 0.0)) {
        return Err(Error::Acceptance("slope needs positive sizes and errors".into()));
    }
    let x: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = e.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Coefficient of determination of the least-squares line through (x, y).
pub fn linear_r2(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if syy == 0.0 {
        return 1.0;
    }
    if sxx == 0.0 {
        return 0.0;
    }
    sxy * sxy / (sxx * syy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_and_r2() {
        let h = [0.5, 0.25, 0.125, 0.0625];
        let e: Vec<f64> = h.iter().map(|v: &f64| v.powf(1.5)).collect();
        assert!((loglog_slope(&h, &e).unwrap() - 1.5).abs() < 1e-12);
        let y: Vec<f64> = h.iter().map(|v| 3.0 * v - 1.0).collect();
        assert!((linear_r2(&h, &y) - 1.0).abs() < 1e-14);
        assert_eq!(fmt_f(0.1), "1.0000000000000001e-1");
    }

    #[test]
    fn summary_round_trip() {
        let mut s = Summary::new("patch-test");
        s.check("stress", 1e-12, "<= 1e-8", true);
        s.metric("dofs", 42.0);
        s.finish();
        let back: Summary = toml::from_str(&s.to_toml()).unwrap();
        assert_eq!(back, s);
        assert!(back.passed());
    }
}
