//! Machine-readable suite reports.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::config::Config;
use crate::hecke::ConditionStat;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveInfo {
    pub tau: [f64; 2],
    pub trunc: usize,
    pub tol: f64,
    pub scale_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub condition: String,
    pub samples: usize,
    pub worst_abs: f64,
    pub worst_rel: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl Check {
    pub fn from_stat(name: impl Into<String>, s: &ConditionStat) -> Self {
        Self {
            name: name.into(),
            condition: s.condition.clone(),
            samples: s.samples,
            worst_abs: finite(s.worst_abs),
            worst_rel: finite(s.worst_rel),
            pass: s.pass,
            diagnostic: s.diagnostic.clone(),
        }
    }
}

/// JSON has no infinities; saturate them.
fn finite(x: f64) -> f64 {
    if x.is_nan() {
        f64::MAX
    } else {
        x.clamp(-f64::MAX, f64::MAX)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub curve: CurveInfo,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl Report {
    pub fn new(suite: impl Into<String>, cfg: &Config) -> Self {
        Self {
            suite: suite.into(),
            seed: cfg.seed,
            curve: CurveInfo { tau: cfg.tau, trunc: cfg.trunc, tol: cfg.tol, scale_tol: cfg.scale_tol },
            pass: true,
            checks: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, s: &ConditionStat) {
        self.checks.push(Check::from_stat(name, s));
    }

    /// Sort checks by name and recompute the overall verdict.
    pub fn finish(mut self) -> Self {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name).then(a.condition.cmp(&b.condition)));
        self.pass = self.checks.iter().all(|c| c.pass);
        self
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
