use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;

pub const MANIFEST_FILE: &str = "manifest.json";

/// One named check with the value observed and the limit it was held to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

impl CheckRecord {
    /// Passes when `value ≤ limit`.
    pub fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self { name: name.to_string(), value, limit, passed: value <= limit }
    }

    /// Passes when `value ≥ limit`.
    pub fn at_least(name: &str, value: f64, limit: f64) -> Self {
        Self { name: name.to_string(), value, limit, passed: value >= limit }
    }
}

/// Completion record written after every other output of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub version: String,
    /// Seconds; the only field that differs between identical runs.
    pub wall_time_s: f64,
    /// File names relative to the output directory.
    pub outputs: Vec<String>,
    pub checks: Vec<CheckRecord>,
    pub results: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
    pub passed: bool,
    pub error: Option<String>,
}
