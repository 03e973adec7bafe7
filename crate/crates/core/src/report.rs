//! Pass/fail diagnostics shared by the symbolic checks.

use serde::{Deserialize, Serialize};

/// Outcome of an exhaustive check: passes iff no violation was recorded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    /// Number of cases examined (pairs, triples, generators, ...).
    pub examined: usize,
    pub violations: Vec<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), examined: 0, violations: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violation(&mut self, msg: impl Into<String>) {
        self.violations.push(msg.into());
    }
}
