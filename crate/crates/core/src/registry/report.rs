use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ExpectedStatus, Family};
use crate::series::Method;

/// Outcome of one verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Mismatch,
    Skipped,
}

impl Status {
    /// 0 pass, 1 fail, 2 mismatch, 3 skipped.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Mismatch => 2,
            Status::Skipped => 3,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Mismatch => "MISMATCH",
            Status::Skipped => "SKIPPED",
        })
    }
}

/// One verification record. Numbers are decimal strings; `precision` is
/// either `"exact"` or `"<p> bits"` and applies to every number in the
/// record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub family: Family,
    pub expected_status: ExpectedStatus,
    pub status: Status,
    pub params: BTreeMap<String, String>,
    /// Index into the committed parameter draws, when one was used.
    pub draw: Option<usize>,
    pub precision: String,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub abs_residual: Option<String>,
    pub rel_residual: Option<String>,
    pub lhs_tail: Option<String>,
    pub rhs_tail: Option<String>,
    pub lhs_terms: Option<usize>,
    pub rhs_terms: Option<usize>,
    pub lhs_method: Option<Method>,
    pub rhs_method: Option<Method>,
    pub diagnostic: Option<String>,
    pub wall_time_us: u64,
}

impl VerificationReport {
    pub(crate) fn blank(id: &str, family: Family, expected: ExpectedStatus, precision: String) -> Self {
        VerificationReport {
            id: id.to_string(),
            family,
            expected_status: expected,
            status: Status::Skipped,
            params: BTreeMap::new(),
            draw: None,
            precision,
            lhs: None,
            rhs: None,
            abs_residual: None,
            rel_residual: None,
            lhs_tail: None,
            rhs_tail: None,
            lhs_terms: None,
            rhs_terms: None,
            lhs_method: None,
            rhs_method: None,
            diagnostic: None,
            wall_time_us: 0,
        }
    }

    /// The report with its timing zeroed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        VerificationReport { wall_time_us: 0, ..self.clone() }
    }

    /// Total terms over both sides.
    pub fn terms_used(&self) -> usize {
        self.lhs_terms.unwrap_or(0) + self.rhs_terms.unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Counts of reports by status.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub mismatch: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let mut s = Summary::default();
        for r in reports {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Mismatch => s.mismatch += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        s
    }

    pub fn total(&self) -> usize {
        self.pass + self.fail + self.mismatch + self.skipped
    }
}

/// Worst exit code over a set of reports; 0 when empty.
pub fn aggregate_exit_code(reports: &[VerificationReport]) -> i32 {
    reports.iter().map(|r| r.status.exit_code()).max().unwrap_or(0)
}

/// One rung of a q -> 1 ladder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rung {
    pub j: u32,
    /// `1 - 2^-j` as an exact literal.
    pub q: String,
    pub lhs_q: Option<String>,
    pub scale: Option<String>,
    /// `|lhs_q / scale - lhs_classical|`.
    pub error: Option<String>,
    pub terms: Option<usize>,
    pub diagnostic: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Decreasing,
    NotDecreasing,
    InsufficientRungs,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Decreasing => "decreasing",
            Verdict::NotDecreasing => "not decreasing",
            Verdict::InsufficientRungs => "insufficient rungs",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitStudy {
    pub pair: String,
    pub q_identity: String,
    pub classical_identity: String,
    pub precision: String,
    pub lhs_classical: String,
    pub rungs: Vec<Rung>,
    pub verdict: Verdict,
}

impl LimitStudy {
    /// 0 when the error decays over the last three rungs, 1 when it does
    /// not, 3 when the ladder is too short to tell.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Decreasing => 0,
            Verdict::NotDecreasing => 1,
            Verdict::InsufficientRungs => 3,
        }
    }
}
