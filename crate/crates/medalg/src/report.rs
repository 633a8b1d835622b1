//! Check verdicts, reproducer files and the summary table.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use medalg_core::{FiniteMedianAlgebra, Violation};
use serde::{Deserialize, Serialize};

use crate::io::{write_file, AlgebraFile};
use crate::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The check does not apply to the instance (size bound, missing
    /// product structure).
    Skip,
}

/// A counterexample, with elements named by their labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub reason: String,
    pub elements: Vec<String>,
}

impl Witness {
    pub fn from_violation(a: &FiniteMedianAlgebra, v: &Violation) -> Self {
        let elements =
            v.elements.iter().map(|&e| if e < a.len() { a.element_name(e) } else { e.to_string() }).collect();
        Witness { reason: v.reason.clone(), elements }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub check_id: String,
    pub instance_id: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    /// Present on failures so the report reproduces on its own.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub algebra: Option<AlgebraFile>,
    pub elapsed_ms: f64,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

/// Per-check counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

pub fn tally(reports: &[TheoremReport]) -> BTreeMap<String, Tally> {
    let mut out: BTreeMap<String, Tally> = BTreeMap::new();
    for r in reports {
        let t = out.entry(r.check_id.clone()).or_default();
        match r.verdict {
            Verdict::Pass => t.pass += 1,
            Verdict::Fail => t.fail += 1,
            Verdict::Skip => t.skip += 1,
        }
    }
    out
}

pub fn summary_table(reports: &[TheoremReport]) -> String {
    let tallies = tally(reports);
    let width = tallies.keys().map(String::len).max().unwrap_or(5).max(5);
    let mut s = String::new();
    writeln!(s, "{:<width$}  {:>6}  {:>6}  {:>6}", "check", "pass", "fail", "skip").unwrap();
    for (id, t) in &tallies {
        writeln!(s, "{id:<width$}  {:>6}  {:>6}  {:>6}", t.pass, t.fail, t.skip).unwrap();
    }
    let fails: usize = tallies.values().map(|t| t.fail).sum();
    let total: usize = tallies.values().map(|t| t.pass + t.fail + t.skip).sum();
    writeln!(s, "{total} verdicts, {fails} failures").unwrap();
    s
}

/// Pretty JSON array of reports.
pub fn to_json(reports: &[TheoremReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports always serialize");
    s.push('\n');
    s
}

/// The reports with timing zeroed, for comparing runs.
pub fn without_timing(reports: &[TheoremReport]) -> Vec<TheoremReport> {
    reports.iter().map(|r| TheoremReport { elapsed_ms: 0.0, ..r.clone() }).collect()
}

/// Writes one self-contained file per failure into `dir`; returns the
/// number written.
pub fn dump_reproducers(reports: &[TheoremReport], dir: &Path) -> Result<usize, HarnessError> {
    let failures: Vec<&TheoremReport> = reports.iter().filter(|r| r.verdict == Verdict::Fail).collect();
    if failures.is_empty() {
        return Ok(0);
    }
    std::fs::create_dir_all(dir).map_err(|source| HarnessError::Write { path: dir.into(), source })?;
    for r in &failures {
        let name = format!("{}__{}.json", r.check_id, r.instance_id);
        let mut body = serde_json::to_string_pretty(r).expect("reports always serialize");
        body.push('\n');
        write_file(&dir.join(name), &body)?;
    }
    Ok(failures.len())
}
