//! Suite reports: named checks with measured values and limits, optional
//! per-sample records, and the run metadata that is allowed to vary
//! between otherwise identical runs.

use serde::{Deserialize, Serialize};

/// Acceptance rule of a check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule", content = "value")]
pub enum Limit {
    /// measured ≤ value
    AtMost(f64),
    /// measured > value
    Above(f64),
    /// measured == value exactly
    Exact(f64),
    /// lo ≤ measured ≤ hi
    Range(f64, f64),
}

impl Limit {
    /// Whether `measured` satisfies the rule. NaN never does.
    pub fn accepts(self, measured: f64) -> bool {
        match self {
            Limit::AtMost(v) => measured <= v,
            Limit::Above(v) => measured > v,
            Limit::Exact(v) => measured == v,
            Limit::Range(lo, hi) => (lo..=hi).contains(&measured),
        }
    }

    /// Same rule with the bound replaced. Exact and range rules are not
    /// tolerances and stay unchanged.
    pub fn with_value(self, v: f64) -> Self {
        match self {
            Limit::AtMost(_) => Limit::AtMost(v),
            Limit::Above(_) => Limit::Above(v),
            other => other,
        }
    }
}

fn nullable_f64<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

/// One named assertion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Non-finite values are written as `null` and read back as NaN.
    #[serde(deserialize_with = "nullable_f64")]
    pub measured: f64,
    pub limit: Limit,
    pub passed: bool,
    /// Number of evaluations the measured value aggregates.
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Check {
    /// Builds a check and evaluates it. A check over zero evaluations fails.
    pub fn new(name: &str, measured: f64, limit: Limit, count: usize) -> Self {
        Self { name: name.into(), measured, limit, passed: count > 0 && limit.accepts(measured), count, note: None }
    }

    /// Attaches an explanatory note.
    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.note = Some(text.into());
        self
    }
}

/// Per-sample measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub sample: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode: Option<usize>,
    pub quantity: String,
    pub value: f64,
}

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    /// Seed of the random sample set; `None` for deterministic sample sets.
    pub seed: Option<u64>,
    pub samples: usize,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub records: Vec<Record>,
    pub passed: bool,
}

impl SuiteReport {
    /// Starts an empty report.
    pub fn new(suite: &str, seed: Option<u64>, samples: usize) -> Self {
        Self { suite: suite.into(), seed, samples, checks: Vec::new(), records: Vec::new(), passed: true }
    }

    /// Adds a check and updates the overall verdict.
    pub fn push(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    /// Looks up a check by name.
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Names of the failed checks.
    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

/// Values that differ between identical runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub elapsed_ms: u128,
    pub version: String,
}

impl Metadata {
    /// Metadata stamped now for a run that took `elapsed`.
    pub fn now(elapsed: std::time::Duration) -> Self {
        let timestamp =
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Self { timestamp, elapsed_ms: elapsed.as_millis(), version: env!("CARGO_PKG_VERSION").into() }
    }
}

/// Output of `verify`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
    pub metadata: Metadata,
}

/// Running maximum that records NaN as a failure value.
#[derive(Clone, Copy, Debug, Default)]
pub struct MaxTracker {
    pub value: f64,
    pub count: usize,
}

impl MaxTracker {
    /// Folds one value in; NaN poisons the maximum.
    pub fn add(&mut self, v: f64) {
        self.count += 1;
        if v.is_nan() || self.value.is_nan() {
            self.value = f64::NAN;
        } else {
            self.value = self.value.max(v);
        }
    }
}

/// Running minimum.
#[derive(Clone, Copy, Debug)]
pub struct MinTracker {
    pub value: f64,
    pub count: usize,
}

impl Default for MinTracker {
    fn default() -> Self {
        Self { value: f64::INFINITY, count: 0 }
    }
}

impl MinTracker {
    /// Folds one value in; NaN poisons the minimum.
    pub fn add(&mut self, v: f64) {
        self.count += 1;
        if v.is_nan() || self.value.is_nan() {
            self.value = f64::NAN;
        } else {
            self.value = self.value.min(v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits() {
        assert!(Limit::AtMost(1.0).accepts(1.0));
        assert!(!Limit::AtMost(1.0).accepts(f64::NAN));
        assert!(!Limit::Above(1.0).accepts(1.0));
        assert!(Limit::Exact(2.0).accepts(2.0));
        assert!(Limit::Range(0.9, 1.1).accepts(1.0));
    }

    #[test]
    fn trackers_propagate_nan() {
        let mut m = MaxTracker::default();
        m.add(1.0);
        m.add(f64::NAN);
        m.add(2.0);
        assert!(m.value.is_nan());
        assert_eq!(m.count, 3);
    }
}
