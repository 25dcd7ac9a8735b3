//! Verification records shared by every suite.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "skipped: insufficient data")]
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub instance: String,
    pub lhs: String,
    pub rhs: String,
    pub status: Status,
}

impl Check {
    /// Passes iff the two printed exact values agree.
    pub fn compare(label: &str, instance: impl Into<String>, lhs: impl fmt::Display, rhs: impl fmt::Display) -> Self {
        let (lhs, rhs) = (lhs.to_string(), rhs.to_string());
        let status = if lhs == rhs { Status::Pass } else { Status::Fail };
        Check { label: label.into(), instance: instance.into(), lhs, rhs, status }
    }

    pub fn truth(label: &str, instance: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            label: label.into(),
            instance: instance.into(),
            lhs: detail.into(),
            rhs: String::new(),
            status: if ok { Status::Pass } else { Status::Fail },
        }
    }

    pub fn skipped(label: &str, instance: impl Into<String>, why: impl Into<String>) -> Self {
        Check { label: label.into(), instance: instance.into(), lhs: why.into(), rhs: String::new(), status: Status::Skipped }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
    pub cutoff: String,
    pub table_completeness: String,
}

impl Report {
    pub fn new(suite: &str, cutoff: impl fmt::Display, table_completeness: impl Into<String>) -> Self {
        Report { suite: suite.into(), checks: Vec::new(), cutoff: cutoff.to_string(), table_completeness: table_completeness.into() }
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail).collect()
    }

    pub fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    pub fn all_pass(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }
}
