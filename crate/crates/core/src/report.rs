//! Line-oriented check reports.
//!
//! A report renders as a single line:
//! `CHECK <id> <PASS|FAIL|INFO> key=value ...`, parameters first, then
//! witness fields. Field order is insertion order, so identical runs render
//! byte-identical lines.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Info => "INFO",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub id: String,
    pub params: Vec<(String, String)>,
    pub verdict: Verdict,
    pub witness: Vec<(String, String)>,
}

impl CheckReport {
    pub fn new(id: impl Into<String>, verdict: Verdict) -> Self {
        CheckReport {
            id: id.into(),
            params: Vec::new(),
            verdict,
            witness: Vec::new(),
        }
    }

    pub fn pass(id: impl Into<String>) -> Self {
        Self::new(id, Verdict::Pass)
    }

    pub fn fail(id: impl Into<String>) -> Self {
        Self::new(id, Verdict::Fail)
    }

    pub fn info(id: impl Into<String>) -> Self {
        Self::new(id, Verdict::Info)
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn witness(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.witness.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .chain(&self.witness)
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CHECK {} {}", self.id, self.verdict)?;
        for (k, v) in self.params.iter().chain(&self.witness) {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}
