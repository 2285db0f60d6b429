//! Machine-readable verification reports (schema `frobverify-report/1`).

use serde::{Deserialize, Serialize};

pub const REPORT_VERSION: &str = "frobverify-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseKind {
    Exact,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseStatus {
    Pass,
    Warn,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub id: String,
    pub kind: CaseKind,
    pub status: CaseStatus,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub detail: String,
}

impl CaseResult {
    pub fn exact(id: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        CaseResult {
            id: id.into(),
            kind: CaseKind::Exact,
            status: if pass { CaseStatus::Pass } else { CaseStatus::Fail },
            residual: None,
            tolerance: None,
            detail: detail.into(),
        }
    }

    /// Numeric case with the pass/warn/fail ladder: pass below `tol`, warn
    /// below `100 tol`, fail otherwise.
    pub fn numeric(id: impl Into<String>, residual: f64, tol: f64) -> Self {
        let status = if !residual.is_finite() {
            CaseStatus::Error
        } else if residual < tol {
            CaseStatus::Pass
        } else if residual < 100.0 * tol {
            CaseStatus::Warn
        } else {
            CaseStatus::Fail
        };
        CaseResult {
            id: id.into(),
            kind: CaseKind::Numeric,
            status,
            residual: Some(residual),
            tolerance: Some(tol),
            detail: String::new(),
        }
    }

    pub fn error(id: impl Into<String>, kind: CaseKind, message: impl Into<String>) -> Self {
        CaseResult {
            id: id.into(),
            kind,
            status: CaseStatus::Error,
            residual: None,
            tolerance: None,
            detail: message.into(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub version: String,
    pub seed: u64,
    pub cases: Vec<CaseResult>,
}

impl VerificationReport {
    /// Assemble a report: cases are sorted by id and must be unique.
    pub fn new(seed: u64, mut cases: Vec<CaseResult>) -> Self {
        cases.sort_by(|a, b| a.id.cmp(&b.id));
        VerificationReport {
            version: REPORT_VERSION.to_string(),
            seed,
            cases,
        }
    }

    pub fn worst_status(&self) -> CaseStatus {
        self.cases
            .iter()
            .map(|c| c.status)
            .max()
            .unwrap_or(CaseStatus::Pass)
    }

    /// Exit status: 0 when nothing failed (warnings allowed), 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self.worst_status() {
            CaseStatus::Pass | CaseStatus::Warn => 0,
            CaseStatus::Fail | CaseStatus::Error => 1,
        }
    }

    pub fn count(&self, status: CaseStatus) -> usize {
        self.cases.iter().filter(|c| c.status == status).count()
    }
}

/// Structural validation of a serialized report against the schema: exact
/// field set, enum values, unique sorted ids, version string.
pub fn validate_report_json(value: &serde_json::Value) -> Result<(), String> {
    let obj = value.as_object().ok_or("report must be an object")?;
    for key in ["version", "seed", "cases"] {
        if !obj.contains_key(key) {
            return Err(format!("missing field `{key}`"));
        }
    }
    if obj.len() != 3 {
        return Err("unexpected extra fields".to_string());
    }
    if obj["version"].as_str() != Some(REPORT_VERSION) {
        return Err(format!("version must be `{REPORT_VERSION}`"));
    }
    if !obj["seed"].is_u64() {
        return Err("seed must be a non-negative integer".to_string());
    }
    let cases = obj["cases"].as_array().ok_or("cases must be an array")?;
    let mut prev_id: Option<&str> = None;
    for case in cases {
        let c = case.as_object().ok_or("case must be an object")?;
        let id = c
            .get("id")
            .and_then(|v| v.as_str())
            .ok_or("case id must be a string")?;
        if let Some(p) = prev_id {
            if p >= id {
                return Err(format!("case ids not strictly sorted at `{id}`"));
            }
        }
        prev_id = Some(id);
        match c.get("kind").and_then(|v| v.as_str()) {
            Some("exact") | Some("numeric") => {}
            other => return Err(format!("bad kind {other:?} in `{id}`")),
        }
        match c.get("status").and_then(|v| v.as_str()) {
            Some("pass") | Some("warn") | Some("fail") | Some("error") => {}
            other => return Err(format!("bad status {other:?} in `{id}`")),
        }
        for numfield in ["residual", "tolerance"] {
            match c.get(numfield) {
                Some(v) if v.is_null() || v.is_number() => {}
                None => return Err(format!("missing `{numfield}` in `{id}`")),
                _ => return Err(format!("bad `{numfield}` in `{id}`")),
            }
        }
        match c.get("detail") {
            Some(v) if v.is_string() => {}
            _ => return Err(format!("missing or bad `detail` in `{id}`")),
        }
    }
    Ok(())
}
