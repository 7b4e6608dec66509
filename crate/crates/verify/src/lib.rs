//! Verdict lines for the acceptance run in `tests/acceptance.rs`.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub id: u32,
    pub title: &'static str,
    pub pass: bool,
    /// Measured values, one entry per clause.
    pub details: Vec<String>,
}

impl Verdict {
    pub fn new(id: u32, title: &'static str) -> Self {
        Self {
            id,
            title,
            pass: true,
            details: Vec::new(),
        }
    }

    /// Records a clause; the verdict fails if any clause does.
    pub fn clause(&mut self, ok: bool, detail: impl Into<String>) -> &mut Self {
        self.pass &= ok;
        let mark = if ok { "ok  " } else { "FAIL" };
        self.details.push(format!("{mark} {}", detail.into()));
        self
    }

    /// A run that could not complete counts as a failure.
    pub fn error(&mut self, what: &str, e: impl fmt::Display) -> &mut Self {
        self.clause(false, format!("{what}: error: {e}"))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{status}  criterion {:>2}  {}", self.id, self.title)?;
        for d in &self.details {
            write!(f, "\n        {d}")?;
        }
        Ok(())
    }
}

pub fn summary(verdicts: &[Verdict]) -> String {
    let passed = verdicts.iter().filter(|v| v.pass).count();
    format!("acceptance: {passed}/{} criteria pass", verdicts.len())
}
