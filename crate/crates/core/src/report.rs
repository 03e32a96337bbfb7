use alloc::string::String;
use alloc::vec::Vec;

use crate::bidegree::DimTable;

/// Outcome of one verification over a finite family of cases.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    /// First failing case, or an informational note.
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: true,
            cases: 0,
            witness: None,
        }
    }

    /// Records one case; keeps the first failure as the witness.
    pub fn case(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.passed {
            self.passed = false;
            self.witness = Some(witness());
        }
    }

    pub fn note(mut self, s: impl Into<String>) -> Self {
        if self.passed {
            self.witness = Some(s.into());
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NamedTable {
    pub name: String,
    pub table: DimTable,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SuiteReport {
    pub suite: String,
    pub n: usize,
    pub checks: Vec<Check>,
    pub tables: Vec<NamedTable>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, n: usize) -> Self {
        SuiteReport {
            suite: suite.into(),
            n,
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn table(&mut self, name: impl Into<String>, table: DimTable) {
        self.tables.push(NamedTable {
            name: name.into(),
            table,
        });
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
