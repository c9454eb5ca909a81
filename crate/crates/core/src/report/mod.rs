//! Verification reports, the suite that produces them and their emission.

mod config;
mod emit;
mod suite;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use config::{Format, RunConfig};
pub use emit::{emit, write_atomic, zero_table_csv, zero_table_json, DataTable};
pub use suite::{run_suite, SuiteOutput};

use crate::error::{Error, Result};

/// Check ids accepted by [`run_suite`], in suite order.
pub const CHECK_IDS: [&str; 9] = [
    "eigen", "adjoint", "anomaly", "bk", "borel", "biortho", "pt", "boundary", "primes",
];

/// One check's inputs, defects and verdict. Every metric is a defect that
/// passes when it is at most `tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: String,
    /// The identity being checked.
    pub paper_anchor: String,
    pub params: BTreeMap<String, String>,
    pub metrics: BTreeMap<String, f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub runtime_ms: u64,
}

impl VerificationReport {
    pub fn new(
        check_id: impl Into<String>,
        anchor: impl Into<String>,
        params: &[(&str, String)],
        metrics: &[(&str, f64)],
        tolerance: f64,
    ) -> Self {
        let metrics: BTreeMap<String, f64> =
            metrics.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let pass = metrics.values().all(|v| *v <= tolerance);
        Self {
            check_id: check_id.into(),
            paper_anchor: anchor.into(),
            params: params
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            metrics,
            tolerance,
            pass,
            runtime_ms: 0,
        }
    }

    /// A check that could not be evaluated. It fails with an `error` metric
    /// of f64::MAX and the message in `params`.
    pub fn failed(
        check_id: impl Into<String>,
        anchor: impl Into<String>,
        params: &[(&str, String)],
        tolerance: f64,
        error: &Error,
    ) -> Self {
        let mut r = Self::new(check_id, anchor, params, &[("error", f64::MAX)], tolerance);
        r.params.insert("error".into(), error.to_string());
        r
    }
}

/// Parses a selection; an empty list means every check.
pub fn parse_selection(ids: &[String]) -> Result<Vec<&'static str>> {
    if ids.is_empty() {
        return Ok(CHECK_IDS.to_vec());
    }
    let mut out = Vec::new();
    for id in ids {
        let found = CHECK_IDS
            .iter()
            .find(|c| **c == id.as_str())
            .ok_or_else(|| {
                Error::Configuration(format!(
                    "unknown check {id:?}; valid ids: {}",
                    CHECK_IDS.join(", ")
                ))
            })?;
        if !out.contains(found) {
            out.push(*found);
        }
    }
    out.sort_by_key(|id| CHECK_IDS.iter().position(|c| c == id));
    Ok(out)
}
