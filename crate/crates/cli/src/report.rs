//! Verification reports.
//!
//! Every check is phrased as `lhs ≥ rhs` with `slack = lhs − rhs`. Drift and
//! residual checks put the limit on the left and the measured value on the
//! right.

use serde::{Serialize, Serializer};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The orthogonalization search ran out of horizon.
    Inconclusive,
    /// Analytic certificate that the state never orthogonalizes; not a failure.
    NeverOrthogonal,
}

impl Verdict {
    pub fn is_failure(self) -> bool {
        self == Verdict::Fail
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Overall {
    Pass,
    Fail,
    Inconclusive,
}

impl Overall {
    /// 0 pass, 1 check failure, 3 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Overall::Pass => 0,
            Overall::Fail => 1,
            Overall::Inconclusive => 3,
        }
    }
}

fn number<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str(&crate::table::format_number(*x))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(serialize_with = "number")]
    pub lhs: f64,
    #[serde(serialize_with = "number")]
    pub rhs: f64,
    #[serde(serialize_with = "number")]
    pub slack: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

fn slack_of(lhs: f64, rhs: f64) -> f64 {
    if lhs == rhs {
        0.0
    } else {
        lhs - rhs
    }
}

impl Check {
    /// `lhs ≥ rhs` up to `tol`.
    pub fn bound(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = slack_of(lhs, rhs);
        let verdict = if slack >= -tol { Verdict::Pass } else { Verdict::Fail };
        Self { name: name.into(), lhs, rhs, slack, verdict, detail: None }
    }

    /// `value < limit`.
    pub fn limit(name: impl Into<String>, value: f64, limit: f64) -> Self {
        let verdict = if value < limit { Verdict::Pass } else { Verdict::Fail };
        Self { name: name.into(), lhs: limit, rhs: value, slack: slack_of(limit, value), verdict, detail: None }
    }

    pub fn with_verdict(name: impl Into<String>, lhs: f64, rhs: f64, verdict: Verdict) -> Self {
        Self { name: name.into(), lhs, rhs, slack: slack_of(lhs, rhs), verdict, detail: None }
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportDocument {
    pub suite: String,
    pub tool_version: String,
    pub input_digest: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub overall: Overall,
}

impl ReportDocument {
    pub fn new(suite: &str, input_digest: String, seed: u64, checks: Vec<Check>, notes: Vec<String>) -> Self {
        let overall = overall(&checks);
        Self {
            suite: suite.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            input_digest,
            seed,
            checks,
            notes,
            overall,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn summary(&self) -> String {
        let count = |v: Verdict| self.checks.iter().filter(|c| c.verdict == v).count();
        format!(
            "{}: {} checks, {} pass, {} fail, {} inconclusive, {} never-orthogonal: overall {:?}",
            self.suite,
            self.checks.len(),
            count(Verdict::Pass),
            count(Verdict::Fail),
            count(Verdict::Inconclusive),
            count(Verdict::NeverOrthogonal),
            self.overall
        )
    }
}

/// Fail if any check fails; otherwise inconclusive if any is; otherwise pass.
pub fn overall(checks: &[Check]) -> Overall {
    if checks.iter().any(|c| c.verdict.is_failure()) {
        Overall::Fail
    } else if checks.iter().any(|c| c.verdict == Verdict::Inconclusive) {
        Overall::Inconclusive
    } else {
        Overall::Pass
    }
}
