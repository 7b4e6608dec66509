//! Pass/fail/warn lines shared by the verification reports.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Warn,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Warn => "WARN",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ReportLine {
    pub status: Status,
    pub label: String,
    pub detail: String,
}

impl ReportLine {
    pub fn new(status: Status, label: &str, detail: String) -> Self {
        Self {
            status,
            label: label.into(),
            detail,
        }
    }

    /// Engine self-consistency: a mismatch is a failure.
    pub fn check(ok: bool, label: &str, detail: String) -> Self {
        Self::new(if ok { Status::Pass } else { Status::Fail }, label, detail)
    }

    /// Engine against a stated step: a mismatch is a warning.
    pub fn compare(ok: bool, label: &str, detail: String) -> Self {
        Self::new(if ok { Status::Pass } else { Status::Warn }, label, detail)
    }
}

impl fmt::Display for ReportLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}  {}", self.status, self.label)?;
        if !self.detail.is_empty() {
            write!(f, "\n      {}", self.detail)?;
        }
        Ok(())
    }
}
