use std::fmt;

use serde::Serialize;

/// Outcome of one named identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub pass: bool,
    /// Basis multi-index of the first failing entry, empty on success.
    pub witness: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Ordered list of identity checks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, name: impl Into<String>, witness: Option<Vec<usize>>) {
        self.entries.push(CheckEntry { name: name.into(), pass: witness.is_none(), witness: witness.unwrap_or_default(), note: None });
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.record(name, None);
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: Vec<usize>) {
        self.record(name, Some(witness));
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.record(name, if ok { None } else { Some(Vec::new()) });
    }

    /// Adds an informational note to the most recent entry.
    pub fn annotate(&mut self, note: impl Into<String>) {
        if let Some(e) = self.entries.last_mut() {
            e.note = Some(note.into());
        }
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.entries.extend(other.entries);
    }

    /// Same entries with names prefixed, for nesting sub-reports.
    pub fn prefixed(mut self, prefix: &str) -> CheckReport {
        for e in &mut self.entries {
            e.name = format!("{prefix}{}", e.name);
        }
        self
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn get(&self, name: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.get(name).is_some_and(|e| e.pass)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let status = if e.pass { "ok  " } else { "FAIL" };
            write!(f, "{status} {}", e.name)?;
            if !e.pass && !e.witness.is_empty() {
                write!(f, " at {:?}", e.witness)?;
            }
            if let Some(n) = &e.note {
                write!(f, " ({n})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefixed_and_failures() {
        let mut r = CheckReport::new();
        r.pass("a");
        r.fail("b", vec![3]);
        let r = r.prefixed("x: ");
        assert!(r.passed("x: a") && !r.passed("x: b"));
        assert_eq!(r.failures().map(|e| e.witness.clone()).collect::<Vec<_>>(), vec![vec![3]]);
        assert!(!r.passed("missing"));
    }
}
