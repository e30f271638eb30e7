//! Structured verification results.

use serde::Serialize;
use serde_json::{Map, Value};

/// One named check with its measured value and tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub check: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub meta: Map<String, Value>,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64, pass: bool) -> Self {
        Self { check: name.into(), value, tolerance, pass, meta: Map::new() }
    }

    /// Passes when `value <= tolerance`.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name, value, tolerance, value <= tolerance)
    }

    /// Passes when `value >= tolerance` (the tolerance is a floor).
    pub fn at_least(name: impl Into<String>, value: f64, floor: f64) -> Self {
        Self::new(name, value, floor, value >= floor)
    }

    /// Passes when |value - target| <= tolerance; `value` is the deviation.
    pub fn near(name: impl Into<String>, measured: f64, target: f64, tolerance: f64) -> Self {
        let dev = (measured - target).abs();
        Self::new(name, dev, tolerance, dev <= tolerance).with("measured", measured).with("target", target)
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }
}

/// Ordered list of checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Prefix every check name, for grouping suites.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for c in &mut self.checks {
            c.check = format!("{prefix}.{}", c.check);
        }
        self
    }
}

/// JSON number for a float, or null when not finite.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(num).collect())
}
