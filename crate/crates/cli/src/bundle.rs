use std::collections::BTreeMap;
use std::fmt::Write as _;

use cqh_core::CheckReport;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub name: String,
    /// Informational sections never affect the exit code.
    pub informational: bool,
    pub report: CheckReport,
}

/// Machine-readable result of one invocation. Everything except `timing_ms` is a pure function of the inputs.
#[derive(Clone, Debug, Serialize)]
pub struct ReportBundle {
    pub schema: u32,
    pub tool_version: String,
    pub command: String,
    pub field: Option<String>,
    pub inputs: Vec<String>,
    pub seed: Option<u64>,
    pub sections: Vec<Section>,
    pub verdicts: BTreeMap<String, Value>,
    /// Human-readable verdict lines, in order.
    pub summary: Vec<String>,
    pub passed: bool,
    pub timing_ms: u64,
}

impl ReportBundle {
    pub fn new(command: &str) -> Self {
        ReportBundle {
            schema: SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            field: None,
            inputs: Vec::new(),
            seed: None,
            sections: Vec::new(),
            verdicts: BTreeMap::new(),
            summary: Vec::new(),
            passed: true,
            timing_ms: 0,
        }
    }

    pub fn section(&mut self, name: impl Into<String>, report: CheckReport) {
        self.passed &= report.all_pass();
        self.sections.push(Section { name: name.into(), informational: false, report });
    }

    pub fn info(&mut self, name: impl Into<String>, report: CheckReport) {
        self.sections.push(Section { name: name.into(), informational: true, report });
    }

    pub fn verdict(&mut self, key: &str, value: impl Serialize) {
        self.verdicts.insert(key.to_string(), serde_json::to_value(value).expect("verdicts serialize"));
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.summary.push(text.into());
    }

    /// Marks the run failed without a failing check (negative verdicts).
    pub fn fail(&mut self) {
        self.passed = false;
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.sections {
            let total = s.report.entries.len();
            let failed: Vec<_> = s.report.failures().collect();
            let tag = match (failed.is_empty(), s.informational) {
                (true, _) => "PASS",
                (false, true) => "INFO",
                (false, false) => "FAIL",
            };
            let _ = writeln!(out, "[{tag}] {} ({}/{total} identities hold)", s.name, total - failed.len());
            for e in failed {
                let _ = write!(out, "    failed: {}", e.name);
                if !e.witness.is_empty() {
                    let _ = write!(out, " at {:?}", e.witness);
                }
                let _ = writeln!(out);
            }
        }
        for line in &self.summary {
            let _ = writeln!(out, "{line}");
        }
        out
    }
}
