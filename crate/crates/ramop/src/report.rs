use std::collections::BTreeMap;
use std::fmt::Write;

use ramop_core::report::{NamedTable, SuiteReport};
use ramop_core::DimTable;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// Machine-readable record of one invocation. Contains no timings, so identical
/// invocations give identical bytes.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Report {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub presentation_hashes: BTreeMap<String, String>,
    pub passed: bool,
    pub tables: Vec<NamedTable>,
    pub suites: Vec<SuiteReport>,
    pub result: Option<Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            parameters: BTreeMap::new(),
            seed: None,
            presentation_hashes: BTreeMap::new(),
            passed: true,
            tables: Vec::new(),
            suites: Vec::new(),
            result: None,
        }
    }

    pub fn param(&mut self, k: &str, v: impl Into<Value>) {
        self.parameters.insert(k.to_string(), v.into());
    }

    pub fn table(&mut self, name: impl Into<String>, table: DimTable) {
        self.tables.push(NamedTable {
            name: name.into(),
            table,
        });
    }

    pub fn suite(&mut self, s: SuiteReport) {
        self.passed &= s.passed();
        self.suites.push(s);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Aligned plain-text rendering.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{}", self.command);
        for (k, v) in self.parameters.iter() {
            let _ = write!(out, " {k}={}", plain(v));
        }
        out.push('\n');
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed {seed}");
        }
        for t in self.tables.iter() {
            render_table(&mut out, &t.name, &t.table);
        }
        if let Some(Value::Object(m)) = &self.result {
            for (k, v) in m.iter() {
                if v.is_array() || v.is_object() {
                    continue;
                }
                let _ = writeln!(out, "{k}: {}", plain(v));
            }
        }
        for s in self.suites.iter() {
            let _ = writeln!(out, "[{}] n={}", s.suite, s.n);
            for c in s.checks.iter() {
                let mark = if c.passed { "pass" } else { "FAIL" };
                let _ = write!(out, "  {mark}  {:<56} {:>8}", c.name, c.cases);
                if let Some(w) = &c.witness {
                    let _ = write!(out, "  {w}");
                }
                out.push('\n');
            }
            for t in s.tables.iter() {
                render_table(&mut out, &t.name, &t.table);
            }
        }
        let _ = writeln!(out, "{}", if self.passed { "all checks passed" } else { "some checks FAILED" });
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Rows are the first degree, columns the second.
fn render_table(out: &mut String, name: &str, t: &DimTable) {
    let _ = writeln!(out, "{name}  (total {})", t.total());
    let hmax = t.iter().map(|(d, _)| d.h).max().unwrap_or(0);
    let wmax = t.iter().map(|(d, _)| d.w).max().unwrap_or(0);
    let _ = write!(out, "  h\\w");
    for w in 0..=wmax {
        let _ = write!(out, "{w:>6}");
    }
    out.push('\n');
    for h in 0..=hmax {
        let _ = write!(out, "  {h:>3}");
        for w in 0..=wmax {
            let k = t.get(ramop_core::BiDegree::new(h, w));
            if k == 0 {
                let _ = write!(out, "{:>6}", ".");
            } else {
                let _ = write!(out, "{k:>6}");
            }
        }
        out.push('\n');
    }
}
