//! Plain-text verification report: `key = value` header lines, then one
//! `PASS`/`FAIL` line per check.

use crate::io::fmt_f64;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured <= tolerance` (NaN fails).
    pub fn at_most(name: &str, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_owned(),
            measured,
            tolerance,
            passed: measured <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    header: Vec<(String, String)>,
    checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn header(&mut self, key: &str, value: String) {
        self.header.push((key.to_owned(), value));
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn render(&self) -> String {
        let mut out = String::from("# spopo verification report\n");
        for (k, v) in &self.header {
            out.push_str(&format!("{k} = {v}\n"));
        }
        for c in &self.checks {
            out.push_str(&format!(
                "{} {} measured={} tolerance={}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                fmt_f64(c.measured),
                fmt_f64(c.tolerance)
            ));
        }
        out.push_str(&format!(
            "RESULT {} {}/{}\n",
            if self.passed() { "PASS" } else { "FAIL" },
            self.len() - self.failures(),
            self.len()
        ));
        out
    }
}
