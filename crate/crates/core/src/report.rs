//! Line-oriented verification reports.
//!
//! Every batch verification job produces a [`Report`]: a titled list of named
//! checks, each pass or fail, plus free-form notes. The text rendering is a
//! stable protocol consumed by scripts, one `RELATION <name> PASS|FAIL` line
//! per check and a final `CHECKS <n> FAILURES <m>` summary, so check names
//! must not contain whitespace.

use serde::Serialize;
use std::fmt;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Shown after FAIL; a counterexample or a short reason.
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report {
            title: title.into(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn record(&mut self, name: impl Into<String>, pass: bool, witness: impl Into<String>) {
        let name = name.into();
        debug_assert!(
            !name.contains(char::is_whitespace),
            "check name {name:?} would break the line protocol"
        );
        self.checks.push(Check {
            name,
            pass,
            witness: witness.into(),
        });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            if check.pass {
                writeln!(f, "RELATION {} PASS", check.name)?;
            } else {
                writeln!(f, "RELATION {} FAIL {}", check.name, check.witness)?;
            }
        }
        for note in &self.notes {
            writeln!(f, "NOTE {note}")?;
        }
        write!(
            f,
            "CHECKS {} FAILURES {}",
            self.checks.len(),
            self.failures().count()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering_follows_the_line_protocol() {
        let mut r = Report::new("demo");
        r.record("alpha-order[pc:1,2]", true, "");
        r.record("beta", false, "x1 != x2");
        r.note("orders taken mod 3");
        let text = r.to_string();
        assert_eq!(
            text,
            "RELATION alpha-order[pc:1,2] PASS\n\
             RELATION beta FAIL x1 != x2\n\
             NOTE orders taken mod 3\n\
             CHECKS 2 FAILURES 1"
        );
        assert!(!r.all_pass());
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn empty_report_passes() {
        let r = Report::new("empty");
        assert!(r.all_pass());
        assert_eq!(r.to_string(), "CHECKS 0 FAILURES 0");
    }
}
