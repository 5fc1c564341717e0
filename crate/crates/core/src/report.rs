//! Machine-readable run reports with stable field names.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub violations: usize,
    pub details: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub version: u32,
    pub suite: String,
    pub params: Value,
    pub checks: Vec<CheckResult>,
    pub counters: Map<String, Value>,
    pub wall_ms: u64,
}

impl RunReport {
    pub fn new(suite: &str, params: Value) -> Self {
        RunReport {
            version: 1,
            suite: suite.to_string(),
            params,
            checks: Vec::new(),
            counters: Map::new(),
            wall_ms: 0,
        }
    }

    pub fn check(&mut self, name: &str, violations: usize, details: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            pass: violations == 0,
            violations,
            details: details.into(),
        });
    }

    pub fn counter(&mut self, key: &str, value: impl Into<Value>) {
        self.counters.insert(key.to_string(), value.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn find(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Human-readable table, one line per check.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("suite {} ({})\n", self.suite, json(&self.params)));
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "  [{status}] {:40} violations={:<6} {}\n",
                c.name, c.violations, c.details
            ));
        }
        out.push_str(&format!(
            "  => {} in {} ms\n",
            if self.passed() { "OK" } else { "FAILED" },
            self.wall_ms
        ));
        out
    }
}

fn json(v: &Value) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

/// Convenience for parameter blobs.
pub fn params(pairs: &[(&str, Value)]) -> Value {
    let mut map = Map::new();
    for (k, v) in pairs {
        map.insert(k.to_string(), v.clone());
    }
    json!(map)
}
