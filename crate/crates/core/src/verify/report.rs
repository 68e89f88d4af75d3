//! Verification reports: one record per registered claim, with per-parameter cases.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::check::Witness;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub q: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    /// Which input or sub-identity a case refers to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<i64>,
}

impl Params {
    pub fn q(q: u32) -> Self {
        Params { q, ..Default::default() }
    }

    pub fn j(mut self, j: u32) -> Self {
        self.j = Some(j);
        self
    }

    pub fn k(mut self, k: u32) -> Self {
        self.k = Some(k);
        self
    }

    pub fn s(mut self, s: u32) -> Self {
        self.s = Some(s);
        self
    }

    pub fn variant(mut self, v: impl Into<String>) -> Self {
        self.variant = Some(v.into());
        self
    }

    pub fn precision(mut self, p: i64) -> Self {
        self.precision = Some(p);
        self
    }

    pub fn label(&self) -> String {
        // q = 0 marks a field-independent case
        let mut parts = if self.q == 0 { vec!["global".to_string()] } else { vec![format!("q={}", self.q)] };
        for (name, v) in [("j", self.j), ("k", self.k), ("s", self.s)] {
            if let Some(v) = v {
                parts.push(format!("{name}={v}"));
            }
        }
        if let Some(v) = &self.variant {
            parts.push(v.clone());
        }
        if let Some(p) = self.precision {
            parts.push(format!("prec={p}"));
        }
        parts.join(" ")
    }
}

/// One parameter point of a claim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub params: Params,
    pub status: Status,
    /// Absent for skipped cases.
    pub witness: Option<Witness>,
    /// Reason for skipping, or measured data worth reporting.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
    /// Wall time of the computation that produced the case.
    pub wall_ms: f64,
}

impl Case {
    pub fn checked(params: Params, witness: Witness) -> Self {
        let status = if witness.passed { Status::Pass } else { Status::Fail };
        Case { params, status, witness: Some(witness), note: String::new(), wall_ms: 0.0 }
    }

    pub fn skipped(params: Params, reason: impl Into<String>) -> Self {
        Case { params, status: Status::Skipped, witness: None, note: reason.into(), wall_ms: 0.0 }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub claim_id: String,
    pub anchor: String,
    pub status: Status,
    pub cases: Vec<Case>,
    pub wall_ms: f64,
}

impl Record {
    pub fn new(claim_id: &str, anchor: &str, cases: Vec<Case>) -> Self {
        let status = if cases.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if cases.iter().any(|c| c.status == Status::Pass) {
            Status::Pass
        } else {
            Status::Skipped
        };
        let wall_ms = cases.iter().map(|c| c.wall_ms).sum();
        Record { claim_id: claim_id.into(), anchor: anchor.into(), status, cases, wall_ms }
    }

    pub fn first_failure(&self) -> Option<&Case> {
        self.cases.iter().find(|c| c.status == Status::Fail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub records: Vec<Record>,
}

impl VerificationReport {
    /// True when no record failed.
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status != Status::Fail)
    }

    pub fn record(&self, claim_id: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.claim_id == claim_id)
    }

    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    /// The report with every wall time zeroed, for comparing runs.
    pub fn without_timing(&self) -> VerificationReport {
        let mut out = self.clone();
        for r in &mut out.records {
            r.wall_ms = 0.0;
            for c in &mut r.cases {
                c.wall_ms = 0.0;
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::Error::Parse(e.to_string()))
    }

    /// A fixed-width table: one line per claim, then one indented line per case.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let width = self.records.iter().map(|r| r.claim_id.len()).max().unwrap_or(5).max(5);
        let _ = writeln!(out, "{:<width$}  {:<7}  {:>9}  {:>10}  statement", "claim", "status", "cases", "ms");
        for r in &self.records {
            let passed = r.cases.iter().filter(|c| c.status == Status::Pass).count();
            let _ = writeln!(
                out,
                "{:<width$}  {:<7}  {:>9}  {:>10.1}  {}",
                r.claim_id,
                r.status.as_str(),
                format!("{passed}/{}", r.cases.len()),
                r.wall_ms,
                r.anchor
            );
            for c in &r.cases {
                let mut line = format!("    {:<7} {}", c.status.as_str(), c.params.label());
                if let Some(w) = c.witness.as_ref().filter(|w| !w.passed) {
                    match w.first_failure {
                        Some(n) => line.push_str(&format!("  first failure at u^{n}")),
                        None => line.push_str("  failed"),
                    }
                    if !w.detail.is_empty() {
                        line.push_str(&format!(": {}", w.detail));
                    }
                }
                if !c.note.is_empty() {
                    line.push_str(&format!("  [{}]", c.note));
                }
                let _ = writeln!(out, "{line}");
            }
        }
        let _ = writeln!(
            out,
            "{} claims: {} pass, {} fail, {} skipped",
            self.records.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        );
        out
    }
}
